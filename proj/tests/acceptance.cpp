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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "commands.h"
#include "fixtures.h"
#include "ibmfg/cost_eval.h"
#include "ibmfg/equilibrium.h"
#include "ibmfg/implicit_solution.h"
#include "ibmfg/jump_sim.h"
#include "ibmfg/parallel.h"
#include "ibmfg/riccati_ode.h"
#include "oracles.h"

using namespace ibmfg;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kPaths = 10000;

TimeGrid ode_grid(double T) { return TimeGrid(T, 2000); }
TimeGrid sim_grid(double T) { return TimeGrid(T, 500); }

std::shared_ptr<const FeedbackGain> shared_gain(const ModelParams& p) {
  return std::make_shared<const FeedbackGain>(equilibrium_gain(p, ode_grid(p.horizon())));
}

double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome analytic_case() {
  const auto p = testing::with(testing::fig1_raw(10), [](RawParams& r) {
    r.running_penalty = r.incentive * r.incentive;
  });
  const auto phi = solve_phi(p, ode_grid(2.0));
  const auto gain = gain_from_phi(phi, p);
  double max_phi = 0.0, max_psi = 0.0;
  for (double v : phi.values) max_phi = std::max(max_phi, std::abs(v));
  for (double v : gain.psi) max_psi = std::max(max_psi, std::abs(v - p.incentive()));
  return {max_phi <= 1e-12 && max_psi <= 1e-12,
          fmt::format("max|phi| = {:.3g}, max|psi - theta| = {:.3g}", max_phi, max_psi)};
}

Outcome ode_order() {
  const auto p = testing::fig1(10);
  const auto q = oracle::coefficients(10, 1, 1, 10, 0.7);
  const double ref = static_cast<double>(oracle::rk4_backward(q, 0, 2, 2'000'000).front());
  const double e1 = std::abs(solve_phi(p, TimeGrid(2.0, 2000)).values.front() - ref);
  const double e2 = std::abs(solve_phi(p, TimeGrid(2.0, 4000)).values.front() - ref);
  const double ratio = e2 > 0.0 ? e1 / e2 : std::numeric_limits<double>::infinity();
  return {ratio >= 8.0, fmt::format("err(T/2000) = {:.3g}, err(T/4000) = {:.3g}, ratio = {:.3g}",
                                    e1, e2, ratio)};
}

Outcome figure1_convergence() {
  const auto grid = ode_grid(2.0);
  const auto limit = solve_phi(testing::fig1_limit(), grid).values;
  std::vector<double> gaps;
  std::string detail = "sup gaps:";
  for (long long n : {2LL, 5LL, 10LL, 50LL, 100LL}) {
    gaps.push_back(sup_gap(solve_phi(testing::fig1(n), grid).values, limit));
    detail += fmt::format(" n={}: {:.4g}", n, gaps.back());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) decreasing &= gaps[i] < gaps[i - 1];
  const double big = sup_gap(solve_phi(testing::fig1(10000), grid).values, limit);
  detail += fmt::format("; n=1e4: {:.3g}", big);
  return {decreasing && big < 1e-3, detail};
}

Outcome psi_cross_validation() {
  const auto grid = ode_grid(2.0);
  double worst = 0.0;
  for (double lambda : {0.1, 0.5, 1.0, 5.0, 10.0}) {
    const auto p = testing::sweep(10, 0.0, lambda);
    const auto direct = solve_psi_direct(p, grid).values;
    const auto via_phi = gain_from_phi(solve_phi(p, grid), p).psi;
    worst = std::max(worst, sup_gap(direct, via_phi));
  }
  return {worst <= 1e-6, fmt::format("max pointwise gap = {:.3g}", worst)};
}

Outcome lambda_monotonicity() {
  const std::vector<double> lambdas{0.1, 0.5, 1.0, 5.0, 10.0};
  bool pass = true;
  std::string detail;
  for (double c : {0.0, 1.0}) {
    std::vector<std::vector<double>> curves;
    for (double lambda : lambdas) {
      curves.push_back(equilibrium_gain(testing::sweep(10, c, lambda), ode_grid(2.0)).psi);
    }
    const auto violations = cli::count_ordering_violations(curves, 1e-9);
    const bool up = cli::is_monotone(curves.front(), true, 1e-9);
    const bool down = cli::is_monotone(curves.back(), false, 1e-9);
    pass &= violations == 0 && up && down;
    detail += fmt::format("{}(n=10, c={}): {} ordering violations, lambda=0.1 "
                          "nondecreasing {} (psi_0 = {:.4g}, psi_T = {:.4g}), "
                          "lambda=10 nonincreasing {}",
                          detail.empty() ? "" : "; ", c, violations,
                          up ? "yes" : "NO", curves.front().front(),
                          curves.front().back(), down ? "yes" : "NO");
  }
  return {pass, detail};
}

Outcome transform_identity() {
  const auto p = testing::fig1(10);
  const auto sol = solve_phi(p, TimeGrid::with_step(2.0, 1e-3));
  const double r = transform_residual(sol, p);
  auto corrupted = sol;
  for (auto& v : corrupted.values) v += 0.1;
  const double rc = transform_residual(corrupted, p);
  return {r <= 1e-4 && rc > 1e-2,
          fmt::format("residual = {:.3g}, corrupted residual = {:.3g}", r, rc)};
}

Outcome hamiltonian_oracle() {
  const auto p = testing::fig1(5);
  const int n = 5;
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst = 0.0;
  int accepted = 0;
  while (accepted < 100) {
    Eigen::VectorXd x(n), gamma(n), y(n);
    Eigen::MatrixXd q(n, n), r(n, n);
    for (int k = 0; k < n; ++k) {
      x(k) = z(rng);
      gamma(k) = z(rng);
      y(k) = z(rng);
      for (int l = 0; l < n; ++l) {
        q(k, l) = z(rng);
        r(k, l) = z(rng);
      }
    }
    const int i = accepted % n;
    const double closed =
        best_response_pointwise(x.mean() - x(i), y(i), r(i, i), p);
    if (std::abs(closed) > 9.0) continue;
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (int j = -10000; j <= 10000; ++j) {
      gamma(i) = j * 1e-3;
      const double h = hamiltonian(0.0, x, gamma, y, q, r, i, p);
      if (h < best) {
        best = h;
        arg = gamma(i);
      }
    }
    worst = std::max(worst, std::abs(arg - closed));
    ++accepted;
  }
  return {worst <= 1e-3, fmt::format("100 states, max |grid argmin - closed form| = {:.3g}", worst)};
}

struct PathStats {
  double sum_residual;
  std::vector<int> jumps;
  double xbar_T;
};

Outcome simulator_invariants() {
  const auto p = testing::fig2();
  const auto gain = shared_gain(p);
  const auto sim = PathSimulator::nplayer(p, StrategySpec::all_equilibrium(10), gain,
                                          sim_grid(2.0), kSeed);
  const auto stats = map_indexed(kPaths, 0, [&](std::size_t k) {
    const auto path = sim.simulate(k);
    PathStats s{0.0, std::vector<int>(10, 0), 0.0};
    for (std::size_t node = 0; node < path.node_count(); ++node) {
      double xbar = 0.0;
      for (int i = 0; i < 10; ++i) xbar += path.left_limit(node, i);
      xbar /= 10;
      const double psi = gain->at(path.times[node]);
      double sum = 0.0, scale = 0.0;
      for (int i = 0; i < 10; ++i) {
        const double g = Strategy::equilibrium().control(psi, xbar - path.left_limit(node, i));
        sum += g;
        scale += std::abs(g);
      }
      s.sum_residual = std::max(s.sum_residual, std::abs(sum) / (1.0 + scale));
    }
    for (const auto& e : path.events) ++s.jumps[e.player];
    const std::size_t last = path.grid_nodes.back();
    for (int i = 0; i < 10; ++i) s.xbar_T += path.state(last, i) / 10;
    return s;
  });
  const double N = static_cast<double>(kPaths);

  double residual = 0.0;
  for (const auto& s : stats) residual = std::max(residual, s.sum_residual);
  const bool a_ok = residual <= 1e-13;

  bool b_ok = true;
  double worst_z = 0.0;
  for (int i = 0; i < 10; ++i) {
    double m = 0.0, m2 = 0.0;
    for (const auto& s : stats) {
      m += s.jumps[i];
      m2 += static_cast<double>(s.jumps[i]) * s.jumps[i];
    }
    m /= N;
    const double se = std::sqrt((m2 / N - m * m) / (N - 1.0));
    const double zi = std::abs(m - p.intensity() * p.horizon()) / se;
    worst_z = std::max(worst_z, zi);
    b_ok &= zi <= 3.0;
  }

  double xm = 0.0, xm2 = 0.0;
  for (const auto& s : stats) {
    xm += s.xbar_T;
    xm2 += s.xbar_T * s.xbar_T;
  }
  xm /= N;
  const double xse = std::sqrt((xm2 / N - xm * xm) / (N - 1.0));
  const bool c_ok = std::abs(xm) <= 3.0 * xse;

  const auto limit = limit_of(p);
  const auto ou = simulate_limit(limit, nullptr, {}, sim_grid(2.0), kSeed, kPaths,
                                 Strategy::constant(0.0));
  double v1 = 0.0, v2 = 0.0, v4 = 0.0;
  for (const auto& path : ou.paths) {
    const double x = path.state(path.grid_nodes.back(), 0);
    v1 += x;
    v2 += x * x;
    v4 += x * x * x * x;
  }
  v1 /= N;
  v2 /= N;
  v4 /= N;
  const double var = v2 - v1 * v1;
  const double var_se = std::sqrt((v4 - v2 * v2) / N);
  const double a = p.mean_reversion(), s2 = p.volatility() * p.volatility();
  const double expect = s2 * (1.0 - std::exp(-2.0 * a * p.horizon())) / (2.0 * a);
  const bool d_ok = std::abs(var - expect) <= 3.0 * var_se;

  return {a_ok && b_ok && c_ok && d_ok,
          fmt::format("(a) max |sum gamma| / (1 + sum |gamma|) = {:.3g}; (b) max jump-count z = "
                      "{:.3g}; (c) mean xbar_T = {:.3g} (stderr {:.3g}); (d) var X_T = {:.5g} vs "
                      "{:.5g} (stderr {:.3g})",
                      residual, worst_z, xm, xse, var, expect, var_se)};
}

Outcome epsilon_nash() {
  const auto p = testing::fig2();
  const auto gain = shared_gain(p);
  bool pass = true;
  std::string detail;
  for (const char* dev : {"zero", "scaled:0.5", "scaled:1.5"}) {
    const auto r = nash_deviation_test(p, gain, Strategy::parse(dev), sim_grid(2.0), kSeed,
                                       kPaths);
    const bool ok = std::string(dev) == "zero" ? r.delta > 2.0 * r.delta_stderr
                                               : r.consistent_with_nash();
    pass &= ok;
    detail += fmt::format("{}{}: delta = {:.4g} (stderr {:.3g})", detail.empty() ? "" : "; ",
                          dev, r.delta, r.delta_stderr);
  }
  return {pass, detail};
}

Outcome mean_field_consistency() {
  const auto p = testing::fig1_limit();
  const auto bundle = simulate_limit(p, shared_gain(p), {}, sim_grid(2.0), kSeed, kPaths);
  const auto flow = empirical_mean_flow(bundle);
  const double z = cli::max_standardized_deviation(
      flow.mean, flow.std_error, std::vector<double>(flow.mean.size(), 0.0));
  return {z <= 3.0, fmt::format("max_t |mean| / stderr = {:.3g}", z)};
}

std::string determinism_run(unsigned threads) {
  const auto p = testing::fig2();
  const auto gain = shared_gain(p);
  const auto spec = StrategySpec::all_equilibrium(10);
  const SimOptions opts{.threads = threads};
  const auto bundle = simulate_nplayer(p, spec, gain, sim_grid(2.0), kSeed, 300, opts);
  std::ostringstream out;
  write_paths_csv(out, bundle);
  write_events_csv(out, bundle);
  write_cost_csv(out, estimate_costs(*bundle.simulator, 300, threads));
  write_deviation_csv(out, nash_deviation_test(p, gain, Strategy::scaled(0.5), sim_grid(2.0),
                                               kSeed, 300, threads));
  const auto limit = testing::fig1_limit();
  const auto flow = empirical_mean_flow(simulate_limit(limit, shared_gain(limit), {},
                                                       sim_grid(2.0), kSeed, 300,
                                                       Strategy::equilibrium(), opts));
  write_curve_csv(out, flow.grid, flow.mean, "mean");
  return out.str();
}

Outcome determinism() {
  const auto a = determinism_run(1), b = determinism_run(1);
  const auto c = determinism_run(8), d = determinism_run(8);
  const bool same = a == b && a == c && a == d;
  return {same, fmt::format("{} bytes per run, 1 vs 8 threads {}", a.size(),
                            same ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "analytic-case exactness", 0.1, analytic_case},
      {2, "ODE order check", 1.0, ode_order},
      {3, "phi convergence in n", 2.0, figure1_convergence},
      {4, "psi cross-validation", 2.0, psi_cross_validation},
      {5, "lambda-monotonicity and time shape", 0.0, lambda_monotonicity},
      {6, "transform residual", 1.0, transform_identity},
      {7, "Hamiltonian oracle", 5.0, hamiltonian_oracle},
      {8, "simulator invariants", 60.0, simulator_invariants},
      {9, "epsilon-Nash verification", 120.0, epsilon_nash},
      {10, "mean-field consistency", 60.0, mean_field_consistency},
      {11, "determinism across thread counts", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::string timing = fmt::format("{:.3f} s", secs);
    if (c.budget_s > 0.0) timing += fmt::format(" of {:g} s", c.budget_s);
    std::printf("%s [%d] %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
