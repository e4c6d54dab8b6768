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

#include "ibmfg/cost_eval.h"

#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "ibmfg/csv.h"
#include "ibmfg/error.h"
#include "ibmfg/parallel.h"

namespace ibmfg {

double running_cost(double xbar, double xi, double gamma,
                    const ModelParams& params) {
  const double d = xbar - xi;
  return 0.5 * gamma * gamma - params.incentive() * gamma * d +
         0.5 * params.running_penalty() * d * d;
}

double terminal_cost(double xbar, double xi, const ModelParams& params) {
  const double d = xbar - xi;
  return 0.5 * params.terminal_penalty() * d * d;
}

std::vector<PathCost> path_costs(const PathSimulator& sim,
                                 const SamplePath& path) {
  const ModelParams& params = sim.params();
  const int n = path.players;
  const double lambda = params.intensity();
  const auto& strategies = sim.strategy().players;
  std::vector<PathCost> costs(static_cast<std::size_t>(n));
  if (path.node_count() == 0) return costs;

  const auto un = static_cast<std::size_t>(n);
  std::vector<double> left(un);
  // Adds weight * lambda f(t, x) to every player's running cost.
  auto accumulate = [&](double t, const double* x, double weight) {
    const double ref = sim.reference(t, x);
    const double psi = sim.psi(t);
    for (std::size_t i = 0; i < un; ++i) {
      const double gamma = strategies[i].control(psi, ref - x[i]);
      costs[i].running += weight * lambda * running_cost(ref, x[i], gamma, params);
    }
  };

  for (std::size_t node = 0; node + 1 < path.node_count(); ++node) {
    const double h = path.times[node + 1] - path.times[node];
    if (h == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      left[static_cast<std::size_t>(i)] = path.left_limit(node + 1, i);
    }
    accumulate(path.times[node], &path.states[node * un], 0.5 * h);
    accumulate(path.times[node + 1], left.data(), 0.5 * h);
  }
  const std::size_t last = path.node_count() - 1;
  const double* x_end = &path.states[last * un];
  const double ref_end = sim.reference(path.times[last], x_end);
  for (int i = 0; i < n; ++i) {
    costs[static_cast<std::size_t>(i)].terminal =
        terminal_cost(ref_end, x_end[i], params);
  }
  return costs;
}

CostReport summarize_costs(const std::vector<std::vector<PathCost>>& costs) {
  if (costs.empty()) throw Error(ErrorCode::kEmptyBundle, "no paths");
  const std::size_t n = costs.front().size();
  const auto count = static_cast<double>(costs.size());
  CostReport report{std::vector<PlayerCostEstimate>(n), costs.size()};
  for (std::size_t i = 0; i < n; ++i) {
    double run = 0.0, term = 0.0;
    for (const auto& row : costs) {
      run += row[i].running;
      term += row[i].terminal;
    }
    run /= count;
    term /= count;
    const double mean = run + term;
    double ss = 0.0;
    for (const auto& row : costs) {
      const double d = row[i].total() - mean;
      ss += d * d;
    }
    const double se = costs.size() > 1 ? std::sqrt(ss / (count - 1.0) / count)
                                       : 0.0;
    report.players[i] = {mean, se, run, term};
  }
  return report;
}

CostReport estimate_costs(const PathBundle& bundle, const ModelParams& params) {
  if (bundle.paths.empty()) {
    throw Error(ErrorCode::kEmptyBundle, "bundle has no paths");
  }
  if (bundle.params_hash != params.fingerprint()) {
    throw Error(ErrorCode::kGridMismatch,
                "bundle was simulated with different parameters");
  }
  if (!(bundle.grid == bundle.simulator->grid())) {
    throw Error(ErrorCode::kGridMismatch, "bundle grid differs from simulator");
  }
  std::vector<std::vector<PathCost>> costs;
  costs.reserve(bundle.paths.size());
  for (const auto& p : bundle.paths) {
    costs.push_back(path_costs(*bundle.simulator, p));
  }
  return summarize_costs(costs);
}

CostReport estimate_costs(const PathSimulator& sim, std::size_t n_paths,
                          unsigned threads) {
  if (n_paths == 0) throw Error(ErrorCode::kEmptyBundle, "n_paths = 0");
  return summarize_costs(map_indexed(n_paths, threads, [&](std::size_t p) {
    return path_costs(sim, sim.simulate(p));
  }));
}

DeviationReport nash_deviation_test(const ModelParams& params,
                                    std::shared_ptr<const FeedbackGain> gain,
                                    const Strategy& deviation,
                                    const TimeGrid& grid, std::uint64_t seed,
                                    std::size_t n_paths, unsigned threads) {
  if (n_paths == 0) throw Error(ErrorCode::kEmptyBundle, "n_paths = 0");
  const int n = params.player_count();
  const auto base_spec = StrategySpec::all_equilibrium(n);
  const auto base = PathSimulator::nplayer(params, base_spec, gain, grid, seed);
  const auto dev = PathSimulator::nplayer(params, base_spec.with(0, deviation),
                                          gain, grid, seed);

  struct Pair {
    std::vector<PathCost> base;
    std::vector<PathCost> dev;
  };
  const auto pairs = map_indexed(n_paths, threads, [&](std::size_t p) {
    return Pair{path_costs(base, base.simulate(p)),
                path_costs(dev, dev.simulate(p))};
  });

  std::vector<std::vector<PathCost>> base_costs, dev_costs;
  base_costs.reserve(n_paths);
  dev_costs.reserve(n_paths);
  std::vector<double> diffs;
  diffs.reserve(n_paths);
  for (const auto& pr : pairs) {
    diffs.push_back(pr.dev[0].total() - pr.base[0].total());
    base_costs.push_back(pr.base);
    dev_costs.push_back(pr.dev);
  }
  const auto count = static_cast<double>(n_paths);
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= count;
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  const double se = n_paths > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;

  return DeviationReport{summarize_costs(base_costs),
                         summarize_costs(dev_costs),
                         mean,
                         se,
                         deviation.describe(),
                         seed,
                         n_paths};
}

void write_cost_csv(std::ostream& out, const CostReport& report) {
  out << "player,mean_cost,stderr,running,terminal\n";
  for (std::size_t i = 0; i < report.players.size(); ++i) {
    const auto& p = report.players[i];
    out << i << ',' << csv_number(p.mean_cost) << ','
        << csv_number(p.std_error) << ',' << csv_number(p.running) << ','
        << csv_number(p.terminal) << '\n';
  }
}

void write_deviation_text(std::ostream& out, const DeviationReport& r) {
  out << "deviation = " << r.deviation << '\n'
      << "seed = " << r.seed << '\n'
      << "n_paths = " << r.n_paths << '\n'
      << "baseline_cost = " << csv_number(r.baseline.players[0].mean_cost)
      << '\n'
      << "deviated_cost = " << csv_number(r.deviated.players[0].mean_cost)
      << '\n'
      << "delta = " << csv_number(r.delta) << '\n'
      << "delta_stderr = " << csv_number(r.delta_stderr) << '\n'
      << "consistent_with_nash = "
      << (r.consistent_with_nash() ? "true" : "false") << '\n';
}

void write_deviation_csv(std::ostream& out, const DeviationReport& r) {
  out << "deviation,seed,n_paths,baseline_cost,deviated_cost,delta,"
         "delta_stderr,consistent\n";
  out << r.deviation << ',' << r.seed << ',' << r.n_paths << ','
      << csv_number(r.baseline.players[0].mean_cost) << ','
      << csv_number(r.deviated.players[0].mean_cost) << ','
      << csv_number(r.delta) << ',' << csv_number(r.delta_stderr) << ','
      << (r.consistent_with_nash() ? 1 : 0) << '\n';
}

}  // namespace ibmfg
