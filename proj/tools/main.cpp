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

#include <CLI11.hpp>

#include <iostream>

#include "commands.h"

int main(int argc, char** argv) {
  using ibmfg::cli::RunConfig;
  RunConfig config;
  CLI::App app{"Illiquid interbank mean-field game: solvers, simulation and "
               "equilibrium checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t n_paths = 0;
  double dt_ode = 0.0, dt_sim = 0.0;
  std::string out_dir = ".";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "parameter file (flat YAML)");
    cmd->add_option("--set", config.overrides, "override key=value (repeatable)")
        ->take_all();
    cmd->add_option("--seed", config.seed, "master seed (default 0)");
    cmd->add_option("--paths", n_paths, "number of Monte Carlo paths")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dt-ode", dt_ode, "ODE step (default T/2000)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dt-sim", dt_sim, "simulation step (default T/500)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--paths-out", config.paths_out, "dump simulated paths");
    cmd->add_option("--threads", config.threads,
                    "worker threads (0: hardware concurrency)");
  };

  auto* solve = app.add_subcommand("solve-phi", "solve phi and the gain psi");
  auto* conv = app.add_subcommand("convergence", "phi_n versus phi_inf");
  conv->add_option("--n-list", config.n_list, "player counts")->delimiter(',');
  auto* scen = app.add_subcommand("scenario", "simulate and dump paths");
  auto* sweep = app.add_subcommand("psi-sweep", "psi curves across lambda");
  sweep->add_option("--lambda-list", config.lambda_list, "intensities")
      ->delimiter(',');
  sweep->add_flag("--figure-panels", config.figure_panels,
                  "also emit the (n, c) in {10,100}x{0,1} panels");
  auto* nash = app.add_subcommand("nash-check", "unilateral deviation test");
  nash->add_option("--deviation", config.deviation,
                   "equilibrium | zero | scaled:<f> | constant:<v>");
  auto* mf = app.add_subcommand("meanfield-check", "limit mean consistency");
  mf->add_option("--control", config.control,
                 "equilibrium | zero | scaled:<f> | constant:<v>");
  for (auto* cmd : {solve, conv, scen, sweep, nash, mf}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ibmfg::cli::kConfigError;
  }

  config.command = app.get_subcommands().front()->get_name();
  if (!config_path.empty()) config.config_path = config_path;
  if (n_paths > 0) config.n_paths = n_paths;
  if (dt_ode > 0.0) config.dt_ode = dt_ode;
  if (dt_sim > 0.0) config.dt_sim = dt_sim;
  config.out_dir = out_dir;
  return ibmfg::cli::run(config, std::cerr);
}
