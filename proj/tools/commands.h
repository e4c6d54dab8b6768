/*
   Copyright 2026 The ibmfg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibmfg/model_params.h"

namespace ibmfg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kVerificationFailure = 3,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;  // key=value, applied after the file
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_paths;
  std::optional<double> dt_ode;  // default T/2000
  std::optional<double> dt_sim;  // default T/500
  std::filesystem::path out_dir = ".";
  bool paths_out = false;
  unsigned threads = 0;

  // convergence
  std::vector<long long> n_list{2, 5, 10, 50, 100};
  // psi-sweep
  std::vector<double> lambda_list{0.1, 0.5, 1.0, 5.0, 10.0};
  bool figure_panels = false;
  // nash-check
  std::string deviation = "zero";
  // meanfield-check
  std::string control = "equilibrium";
};

// Parameters from the config file (if any) plus overrides, validated.
ModelParams resolve_params(const RunConfig& config);

// Dispatches on config.command. Errors are reported on `log` and mapped to
// exit codes: 1 config, 2 numerical, 3 verification.
int run(const RunConfig& config, std::ostream& log);

int cmd_solve_phi(const RunConfig& config, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_scenario(const RunConfig& config, std::ostream& log);
int cmd_psi_sweep(const RunConfig& config, std::ostream& log);
int cmd_nash_check(const RunConfig& config, std::ostream& log);
int cmd_meanfield_check(const RunConfig& config, std::ostream& log);

// Pointwise ordering check for curves listed by increasing lambda: counts
// (curve, t) pairs where curve j+1 falls below curve j by more than `tol`.
std::size_t count_ordering_violations(
    const std::vector<std::vector<double>>& curves, double tol = 1e-9);

// Whether consecutive differences never go against `increasing` by more
// than `tol`.
bool is_monotone(const std::vector<double>& values, bool increasing,
                 double tol = 1e-9);

// max_t |mean - m| / stderr; a zero stderr counts as 0 if the mean matches.
double max_standardized_deviation(const std::vector<double>& mean,
                                  const std::vector<double>& std_error,
                                  const std::vector<double>& target);

}  // namespace ibmfg::cli
