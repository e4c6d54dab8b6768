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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

#include "ibmfg/cost_eval.h"
#include "ibmfg/csv.h"
#include "ibmfg/equilibrium.h"
#include "ibmfg/error.h"
#include "ibmfg/implicit_solution.h"
#include "ibmfg/jump_sim.h"
#include "ibmfg/parallel.h"
#include "ibmfg/riccati_ode.h"

namespace ibmfg::cli {

namespace fs = std::filesystem;

namespace {

TimeGrid ode_grid(const RunConfig& config, const ModelParams& params) {
  const double T = params.horizon();
  return config.dt_ode ? TimeGrid::with_step(T, *config.dt_ode)
                       : TimeGrid(T, 2000);
}

TimeGrid sim_grid(const RunConfig& config, const ModelParams& params) {
  const double T = params.horizon();
  return config.dt_sim ? TimeGrid::with_step(T, *config.dt_sim)
                       : TimeGrid(T, 500);
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  const fs::path path = config.out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("cannot write '{}'", path.string()));
  }
  return out;
}

void write_params(const RunConfig& config, const ModelParams& params) {
  auto out = open_output(config, "run_params.txt");
  out << params.to_text() << "seed = " << config.seed << '\n';
  if (!params.initial_law().is_centered()) {
    out << "initial_law_centered = false\n";
  }
}

void note_initial_law(const ModelParams& params, std::ostream& log) {
  if (!params.initial_law().is_centered()) {
    log << "note: initial law is not centered (x0_mean = "
        << params.initial_law().mean << ")\n";
  }
}

std::string lambda_label(double lambda) {
  return fmt::format("lambda={}", lambda);
}

ModelParams with_players(const ModelParams& params, PlayerCount n) {
  RawParams raw = params.raw();
  raw.n_players = n;
  return ModelParams::validate(raw);
}

ModelParams with_intensity(const ModelParams& params, double lambda) {
  RawParams raw = params.raw();
  raw.intensity = lambda;
  return ModelParams::validate(raw);
}

struct SweepResult {
  TimeGrid grid;
  std::vector<std::vector<double>> curves;
};

SweepResult sweep_lambda(const RunConfig& config, const ModelParams& params,
                         const std::vector<double>& lambdas) {
  const TimeGrid grid = ode_grid(config, params);
  SweepResult result{grid, {}};
  for (double lambda : lambdas) {
    const auto p = with_intensity(params, lambda);
    result.curves.push_back(gain_from_phi(solve_phi(p, grid), p).psi);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep,
                     const std::vector<double>& lambdas) {
  out << 't';
  for (double l : lambdas) out << ',' << lambda_label(l);
  out << '\n';
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    out << csv_number(sweep.grid[i]);
    for (const auto& c : sweep.curves) out << ',' << csv_number(c[i]);
    out << '\n';
  }
}

}  // namespace

ModelParams resolve_params(const RunConfig& config) {
  RawParams raw = config.config_path ? load_config(*config.config_path)
                                     : RawParams{};
  for (const auto& o : config.overrides) apply_override(raw, o);
  return ModelParams::validate(raw);
}

std::size_t count_ordering_violations(
    const std::vector<std::vector<double>>& curves, double tol) {
  std::size_t violations = 0;
  for (std::size_t j = 0; j + 1 < curves.size(); ++j) {
    const auto& lo = curves[j];
    const auto& hi = curves[j + 1];
    for (std::size_t i = 0; i < std::min(lo.size(), hi.size()); ++i) {
      if (hi[i] < lo[i] - tol) ++violations;
    }
  }
  return violations;
}

bool is_monotone(const std::vector<double>& values, bool increasing,
                 double tol) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double step = values[i + 1] - values[i];
    if (increasing ? step < -tol : step > tol) return false;
  }
  return true;
}

double max_standardized_deviation(const std::vector<double>& mean,
                                  const std::vector<double>& std_error,
                                  const std::vector<double>& target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double gap = std::abs(mean[i] - target[i]);
    double z = 0.0;
    if (std_error[i] > 0.0) {
      z = gap / std_error[i];
    } else if (gap > 1e-12 * (1.0 + std::abs(target[i]))) {
      z = std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, z);
  }
  return worst;
}

int cmd_solve_phi(const RunConfig& config, std::ostream& log) {
  const auto params = resolve_params(config);
  const auto grid = ode_grid(config, params);
  const auto phi = solve_phi(params, grid);
  const auto gain = gain_from_phi(phi, params);
  {
    auto out = open_output(config, "phi.csv");
    write_curve_csv(out, grid, phi.values, "phi");
  }
  {
    auto out = open_output(config, "psi.csv");
    write_curve_csv(out, grid, gain.psi, "psi");
  }
  write_params(config, params);
  const auto domain = domain_check(phi, params);
  log << fmt::format("n = {}: phi(0) = {:.12g}, psi(0) = {:.12g}, "
                     "min(1 + k phi) = {:.6g}\n",
                     params.n_players().to_string(), phi.values.front(),
                     gain.psi.front(), domain.margin);
  return kSuccess;
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  if (config.n_list.empty()) {
    throw Error(ErrorCode::kBadConfig, "convergence needs a nonempty n list");
  }
  const auto base = resolve_params(config);
  const auto grid = ode_grid(config, base);
  std::vector<std::vector<double>> columns;
  for (long long n : config.n_list) {
    columns.push_back(
        solve_phi(with_players(base, PlayerCount::finite(n)), grid).values);
  }
  const auto limit = solve_phi(limit_of(base), grid).values;
  std::vector<double> gaps;
  for (const auto& col : columns) {
    double gap = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) {
      gap = std::max(gap, std::abs(col[i] - limit[i]));
    }
    gaps.push_back(gap);
  }

  auto out = open_output(config, "phi_convergence.csv");
  out << 't';
  for (long long n : config.n_list) out << ",n=" << n;
  out << ",n=inf\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << csv_number(grid[i]);
    for (const auto& col : columns) out << ',' << csv_number(col[i]);
    out << ',' << csv_number(limit[i]) << '\n';
  }
  out << "sup_gap";
  for (double g : gaps) out << ',' << csv_number(g);
  out << ',' << csv_number(0.0) << '\n';
  write_params(config, base);

  bool decreasing = true;
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    log << fmt::format("n = {}: sup |phi_n - phi_inf| = {:.6g}\n",
                       config.n_list[j], gaps[j]);
    if (j > 0 && !(gaps[j] < gaps[j - 1])) decreasing = false;
  }
  log << "gaps strictly decreasing: " << (decreasing ? "yes" : "no") << '\n';
  return kSuccess;
}

int cmd_scenario(const RunConfig& config, std::ostream& log) {
  const auto params = resolve_params(config);
  note_initial_law(params, log);
  const int n = params.player_count();
  auto gain = std::make_shared<const FeedbackGain>(
      equilibrium_gain(params, ode_grid(config, params)));
  const auto bundle = simulate_nplayer(
      params, StrategySpec::all_equilibrium(n), gain,
      sim_grid(config, params), config.seed, config.n_paths.value_or(1),
      SimOptions{.threads = config.threads});
  {
    auto out = open_output(config, "paths.csv");
    write_paths_csv(out, bundle);
  }
  {
    auto out = open_output(config, "events.csv");
    write_events_csv(out, bundle);
  }
  {
    auto out = open_output(config, "psi.csv");
    write_curve_csv(out, gain->grid, gain->psi, "psi");
  }
  write_params(config, params);
  log << fmt::format("{} path(s), {} players, {} jump events\n",
                     bundle.n_paths, n, bundle.events().size());
  return kSuccess;
}

int cmd_psi_sweep(const RunConfig& config, std::ostream& log) {
  if (config.lambda_list.empty()) {
    throw Error(ErrorCode::kBadConfig, "psi-sweep needs a nonempty lambda list");
  }
  const auto params = resolve_params(config);
  if (params.is_limit()) {
    throw Error(ErrorCode::kBadN, "psi-sweep needs a finite n");
  }
  std::vector<double> lambdas = config.lambda_list;
  std::sort(lambdas.begin(), lambdas.end());
  for (double l : lambdas) {
    if (!(l > 0.0)) {
      throw Error(ErrorCode::kNonpositive, fmt::format("lambda = {}", l));
    }
  }

  struct Panel {
    std::string file;
    ModelParams params;
  };
  std::vector<Panel> panels{{"psi_sweep.csv", params}};
  if (config.figure_panels) {
    for (long long n : {10LL, 100LL}) {
      for (double c : {0.0, 1.0}) {
        RawParams raw = params.raw();
        raw.n_players = PlayerCount::finite(n);
        raw.terminal_penalty = c;
        panels.push_back({fmt::format("psi_sweep_n{}_c{}.csv", n, c),
                          ModelParams::validate(raw)});
      }
    }
  }

  auto summary = open_output(config, "psi_sweep_summary.txt");
  std::size_t total_violations = 0;
  for (const auto& panel : panels) {
    const auto sweep = sweep_lambda(config, panel.params, lambdas);
    {
      auto out = open_output(config, panel.file);
      write_sweep_csv(out, sweep, lambdas);
    }
    const std::size_t violations = count_ordering_violations(sweep.curves);
    total_violations += violations;
    summary << "[" << panel.file << "]\n"
            << "n = " << panel.params.n_players().to_string() << '\n'
            << "c = " << csv_number(panel.params.terminal_penalty()) << '\n'
            << "ordering_violations = " << violations << '\n';
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const auto& c = sweep.curves[j];
      const char* shape = is_monotone(c, true)    ? "nondecreasing"
                          : is_monotone(c, false) ? "nonincreasing"
                                                  : "non-monotone";
      summary << lambda_label(lambdas[j]) << ": psi(0) = "
              << csv_number(c.front()) << ", psi(T) = "
              << csv_number(c.back()) << ", shape = " << shape << '\n';
    }
    log << fmt::format("{}: {} ordering violation(s)\n", panel.file,
                       violations);
  }
  write_params(config, params);
  return total_violations == 0 ? kSuccess : kVerificationFailure;
}

int cmd_nash_check(const RunConfig& config, std::ostream& log) {
  const auto params = resolve_params(config);
  note_initial_law(params, log);
  const int n = params.player_count();
  const auto deviation = Strategy::parse(config.deviation);
  auto gain = std::make_shared<const FeedbackGain>(
      equilibrium_gain(params, ode_grid(config, params)));
  const auto grid = sim_grid(config, params);
  const std::size_t n_paths = config.n_paths.value_or(10'000);
  const auto report = nash_deviation_test(params, gain, deviation, grid,
                                          config.seed, n_paths, config.threads);
  {
    auto out = open_output(config, "nash_report.txt");
    write_deviation_text(out, report);
    if (!params.initial_law().is_centered()) {
      out << "initial_law_centered = false\n";
    }
  }
  {
    auto out = open_output(config, "nash_report.csv");
    write_deviation_csv(out, report);
  }
  {
    auto out = open_output(config, "costs_baseline.csv");
    write_cost_csv(out, report.baseline);
  }
  {
    auto out = open_output(config, "costs_deviated.csv");
    write_cost_csv(out, report.deviated);
  }
  if (config.paths_out) {
    const auto bundle = simulate_nplayer(
        params, StrategySpec::all_equilibrium(n).with(0, deviation), gain,
        grid, config.seed, n_paths, SimOptions{.threads = config.threads});
    auto paths = open_output(config, "paths.csv");
    write_paths_csv(paths, bundle);
    auto events = open_output(config, "events.csv");
    write_events_csv(events, bundle);
  }
  write_params(config, params);
  log << fmt::format("deviation {}: delta = {:.6g} (stderr {:.3g}) -> {}\n",
                     report.deviation, report.delta, report.delta_stderr,
                     report.consistent_with_nash() ? "no significant gain"
                                                   : "PROFITABLE DEVIATION");
  return report.consistent_with_nash() ? kSuccess : kVerificationFailure;
}

int cmd_meanfield_check(const RunConfig& config, std::ostream& log) {
  const auto params = resolve_params(config);
  if (!params.is_limit()) {
    throw Error(ErrorCode::kBadN,
                "meanfield-check needs the limit game (use --set n=inf)");
  }
  note_initial_law(params, log);
  const auto control = Strategy::parse(config.control);
  auto gain = std::make_shared<const FeedbackGain>(
      equilibrium_gain(params, ode_grid(config, params)));
  const auto grid = sim_grid(config, params);
  const std::vector<double> m(grid.size(), params.initial_law().mean);
  const auto sim =
      PathSimulator::limit(params, control, gain, m, grid, config.seed);
  const std::size_t n_paths = config.n_paths.value_or(10'000);
  const auto averages = map_indexed(n_paths, config.threads, [&](std::size_t p) {
    return path_average_on_grid(sim.simulate(p));
  });
  const auto flow = mean_flow_from_averages(grid, averages);
  const double worst = max_standardized_deviation(flow.mean, flow.std_error, m);
  {
    auto out = open_output(config, "meanfield_flow.csv");
    out << "t,mean,stderr,m\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << csv_number(grid[i]) << ',' << csv_number(flow.mean[i]) << ','
          << csv_number(flow.std_error[i]) << ',' << csv_number(m[i]) << '\n';
    }
  }
  {
    auto out = open_output(config, "meanfield_report.txt");
    out << "control = " << control.describe() << '\n'
        << "seed = " << config.seed << '\n'
        << "n_paths = " << n_paths << '\n'
        << "max_standardized_deviation = " << csv_number(worst) << '\n'
        << "threshold = 3\n"
        << "consistent = " << (worst <= 3.0 ? "true" : "false") << '\n';
    if (!params.initial_law().is_centered()) {
      out << "initial_law_centered = false\n";
    }
  }
  if (config.paths_out) {
    const auto bundle = simulate_limit(params, gain, m, grid, config.seed,
                                       n_paths, control,
                                       SimOptions{.threads = config.threads});
    auto paths = open_output(config, "paths.csv");
    write_paths_csv(paths, bundle);
    auto events = open_output(config, "events.csv");
    write_events_csv(events, bundle);
  }
  write_params(config, params);
  log << fmt::format("max_t |mean - m| / stderr = {:.4g} over {} paths\n",
                     worst, n_paths);
  return worst <= 3.0 ? kSuccess : kVerificationFailure;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    if (config.command == "solve-phi") return cmd_solve_phi(config, log);
    if (config.command == "convergence") return cmd_convergence(config, log);
    if (config.command == "scenario") return cmd_scenario(config, log);
    if (config.command == "psi-sweep") return cmd_psi_sweep(config, log);
    if (config.command == "nash-check") return cmd_nash_check(config, log);
    if (config.command == "meanfield-check") {
      return cmd_meanfield_check(config, log);
    }
    log << "error: unknown command '" << config.command << "'\n";
    return kConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what();
    if (e.time()) log << " (t = " << *e.time() << ")";
    log << '\n';
    return e.is_numerical() ? kNumericalFailure : kConfigError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace ibmfg::cli
