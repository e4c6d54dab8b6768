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
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ibmfg/jump_sim.h"
#include "ibmfg/model_params.h"

namespace ibmfg {

// f = gamma^2/2 - theta gamma (xbar - x_i) + (eps/2)(xbar - x_i)^2
double running_cost(double xbar, double xi, double gamma,
                    const ModelParams& params);
// g = (c/2)(xbar - x_i)^2
double terminal_cost(double xbar, double xi, const ModelParams& params);

struct PathCost {
  double running = 0.0;
  double terminal = 0.0;
  double total() const noexcept { return running + terminal; }
};

// Cost of every player along one path: trapezoid rule for the integral of
// lambda f over the merged nodes, with the control each strategy would apply
// at that instant, plus the terminal cost.
std::vector<PathCost> path_costs(const PathSimulator& sim,
                                 const SamplePath& path);

struct PlayerCostEstimate {
  double mean_cost;
  double std_error;
  double running;
  double terminal;
};

struct CostReport {
  std::vector<PlayerCostEstimate> players;
  std::size_t n_paths;
};

// Averages per-path costs; rows are paths, columns players.
CostReport summarize_costs(const std::vector<std::vector<PathCost>>& costs);

CostReport estimate_costs(const PathBundle& bundle, const ModelParams& params);

// Same estimate without materializing the paths.
CostReport estimate_costs(const PathSimulator& sim, std::size_t n_paths,
                          unsigned threads = 0);

struct DeviationReport {
  CostReport baseline;
  CostReport deviated;
  double delta;         // deviated - baseline cost of player 0
  double delta_stderr;  // from paired (common random number) differences
  std::string deviation;
  std::uint64_t seed;
  std::size_t n_paths;

  // No significant improvement: delta >= -2 stderr.
  bool consistent_with_nash() const noexcept {
    return delta >= -2.0 * delta_stderr;
  }
};

// Player 0 switches to `deviation` while everyone else keeps the equilibrium
// gain. Both runs share the seed, hence all noise.
DeviationReport nash_deviation_test(const ModelParams& params,
                                    std::shared_ptr<const FeedbackGain> gain,
                                    const Strategy& deviation,
                                    const TimeGrid& grid, std::uint64_t seed,
                                    std::size_t n_paths, unsigned threads = 0);

// `player,mean_cost,stderr,running,terminal`
void write_cost_csv(std::ostream& out, const CostReport& report);
// key = value lines
void write_deviation_text(std::ostream& out, const DeviationReport& report);
// header plus one row
void write_deviation_csv(std::ostream& out, const DeviationReport& report);

}  // namespace ibmfg
