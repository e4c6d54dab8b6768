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

#include "ibmfg/jump_sim.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <ostream>
#include <random>
#include <utility>

#include "ibmfg/csv.h"
#include "ibmfg/error.h"
#include "ibmfg/parallel.h"
#include "ibmfg/rng.h"

namespace ibmfg {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("'{}' is not a finite number", text));
  }
  return value;
}

struct Arrival {
  double time;
  int player;
};

}  // namespace

// ---------------------------------------------------------------------------
// Strategy

Strategy Strategy::scaled(double factor) {
  if (!std::isfinite(factor)) {
    throw Error(ErrorCode::kBadConfig, "scaling factor must be finite");
  }
  return Strategy(Kind::kScaled, factor);
}

Strategy Strategy::constant(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kBadConfig, "constant control must be finite");
  }
  return Strategy(Kind::kConstant, value);
}

Strategy Strategy::parse(std::string_view text) {
  if (text == "equilibrium") return equilibrium();
  if (text == "zero") return zero();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    if (head == "scaled") return scaled(parse_number(tail));
    if (head == "constant") return constant(parse_number(tail));
  }
  throw Error(ErrorCode::kBadConfig,
              fmt::format("unknown strategy '{}' (expected equilibrium, zero, "
                          "scaled:<f> or constant:<v>)",
                          text));
}

std::string Strategy::describe() const {
  switch (kind_) {
    case Kind::kEquilibrium: return "equilibrium";
    case Kind::kScaled: return fmt::format("scaled:{}", parameter_);
    case Kind::kZero: return "zero";
    case Kind::kConstant: return fmt::format("constant:{}", parameter_);
  }
  return "unknown";
}

StrategySpec StrategySpec::all_equilibrium(int n) {
  return uniform(n, Strategy::equilibrium());
}

StrategySpec StrategySpec::uniform(int n, Strategy strategy) {
  return StrategySpec{std::vector<Strategy>(static_cast<std::size_t>(n),
                                            strategy)};
}

StrategySpec StrategySpec::with(int player, Strategy strategy) const {
  if (player < 0 || player >= static_cast<int>(players.size())) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("player {} outside [0, {})", player,
                            players.size()));
  }
  StrategySpec out = *this;
  out.players[static_cast<std::size_t>(player)] = strategy;
  return out;
}

bool StrategySpec::is_all_equilibrium() const {
  return std::all_of(players.begin(), players.end(), [](const Strategy& s) {
    return s.kind() == Strategy::Kind::kEquilibrium;
  });
}

// ---------------------------------------------------------------------------
// PathSimulator

PathSimulator::PathSimulator(const ModelParams& params, StrategySpec strategy,
                             std::shared_ptr<const FeedbackGain> gain,
                             std::vector<double> m, const TimeGrid& grid,
                             std::uint64_t seed, int players, bool limit)
    : params_(params),
      strategy_(std::move(strategy)),
      gain_(std::move(gain)),
      m_(std::move(m)),
      grid_(grid),
      seed_(seed),
      players_(players),
      limit_(limit) {
  if (grid_.horizon() != params_.horizon()) {
    throw Error(ErrorCode::kGridMismatch,
                fmt::format("grid horizon {} != T = {}", grid_.horizon(),
                            params_.horizon()));
  }
  if (static_cast<int>(strategy_.players.size()) != players_) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{} strategies for {} players",
                            strategy_.players.size(), players_));
  }
  const bool needs_gain = std::any_of(
      strategy_.players.begin(), strategy_.players.end(), [](const Strategy& s) {
        return s.kind() == Strategy::Kind::kEquilibrium ||
               s.kind() == Strategy::Kind::kScaled;
      });
  if (needs_gain && !gain_) {
    throw Error(ErrorCode::kBadConfig, "strategy needs a feedback gain");
  }
  if (gain_ && gain_->grid.horizon() != params_.horizon()) {
    throw Error(ErrorCode::kGridMismatch, "gain horizon differs from T");
  }
}

PathSimulator PathSimulator::nplayer(const ModelParams& params,
                                     StrategySpec strategy,
                                     std::shared_ptr<const FeedbackGain> gain,
                                     const TimeGrid& grid, std::uint64_t seed) {
  const int n = params.player_count();
  return PathSimulator(params, std::move(strategy), std::move(gain), {}, grid,
                       seed, n, false);
}

PathSimulator PathSimulator::limit(const ModelParams& params, Strategy strategy,
                                   std::shared_ptr<const FeedbackGain> gain,
                                   std::vector<double> m, const TimeGrid& grid,
                                   std::uint64_t seed) {
  if (!params.is_limit()) {
    throw Error(ErrorCode::kBadN, "limit simulation needs n = inf");
  }
  if (m.empty()) m.assign(grid.size(), params.initial_law().mean);
  if (m.size() != grid.size()) {
    throw Error(ErrorCode::kGridMismatch,
                fmt::format("mean flow has {} values for {} grid points",
                            m.size(), grid.size()));
  }
  return PathSimulator(params, StrategySpec{{strategy}}, std::move(gain),
                       std::move(m), grid, seed, 1, true);
}

double PathSimulator::reference(double t, const double* x) const {
  if (limit_) return interpolate(grid_, m_, t);
  double sum = 0.0;
  for (int i = 0; i < players_; ++i) sum += x[i];
  return sum / players_;
}

SamplePath PathSimulator::simulate(std::size_t path) const {
  const int n = players_;
  const double T = grid_.horizon();
  const double a = params_.mean_reversion();
  const double sigma = params_.volatility();
  const InitialLaw& law = params_.initial_law();

  auto init_rng = make_engine(seed_, path, Stream::kInitial);
  auto brownian_rng = make_engine(seed_, path, Stream::kBrownian);
  auto poisson_rng = make_engine(seed_, path, Stream::kPoisson);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> x(static_cast<std::size_t>(n), law.mean);
  if (!law.is_point_mass()) {
    for (auto& xi : x) xi = law.mean + law.std * normal(init_rng);
  }
  normal.reset();

  // Exact jump times: exponential inter-arrivals, player by player.
  std::vector<Arrival> arrivals;
  {
    std::exponential_distribution<double> gap(params_.intensity());
    for (int i = 0; i < n; ++i) {
      double t = 0.0;
      for (;;) {
        double g = gap(poisson_rng);
        while (!(g > 0.0)) g = gap(poisson_rng);
        t += g;
        if (t > T) break;
        arrivals.push_back({t, i});
      }
    }
    std::sort(arrivals.begin(), arrivals.end(),
              [](const Arrival& l, const Arrival& r) {
                return l.time < r.time ||
                       (l.time == r.time && l.player < r.player);
              });
  }

  SamplePath out;
  out.players = n;
  const std::size_t nodes = grid_.size() + arrivals.size();
  out.times.reserve(nodes);
  out.jumper.reserve(nodes);
  out.jump_size.reserve(nodes);
  out.states.reserve(nodes * static_cast<std::size_t>(n));
  out.grid_nodes.reserve(grid_.size());
  out.events.reserve(arrivals.size());

  auto record = [&](double t, int who, double size) {
    out.times.push_back(t);
    out.jumper.push_back(who);
    out.jump_size.push_back(size);
    out.states.insert(out.states.end(), x.begin(), x.end());
  };

  double t_cur = 0.0;
  out.grid_nodes.push_back(0);
  record(0.0, -1, 0.0);

  auto advance = [&](double t_next) {
    const double dt = t_next - t_cur;
    const double ref = reference(t_cur, x.data());
    const double noise_scale = sigma * std::sqrt(dt);
    for (int i = 0; i < n; ++i) {
      const double z = normal(brownian_rng);
      x[static_cast<std::size_t>(i)] +=
          a * (ref - x[static_cast<std::size_t>(i)]) * dt + noise_scale * z;
    }
    t_cur = t_next;
  };

  std::size_t next_grid = 1;
  std::size_t next_jump = 0;
  while (next_grid < grid_.size() || next_jump < arrivals.size()) {
    // At equal times the grid node comes first.
    const bool take_jump =
        next_jump < arrivals.size() &&
        (next_grid >= grid_.size() || arrivals[next_jump].time < grid_[next_grid]);
    if (take_jump) {
      const Arrival& arr = arrivals[next_jump++];
      advance(arr.time);
      const auto i = static_cast<std::size_t>(arr.player);
      const double deviation = reference(arr.time, x.data()) - x[i];
      const double gamma =
          strategy_.players[i].control(psi(arr.time), deviation);
      x[i] += gamma;
      out.events.push_back({path, arr.player, arr.time, gamma});
      record(arr.time, arr.player, gamma);
    } else {
      advance(grid_[next_grid]);
      out.grid_nodes.push_back(out.times.size());
      record(grid_[next_grid], -1, 0.0);
      ++next_grid;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bundles

std::vector<JumpEvent> PathBundle::events() const {
  std::vector<JumpEvent> all;
  for (const auto& p : paths) {
    all.insert(all.end(), p.events.begin(), p.events.end());
  }
  return all;
}

namespace {

PathBundle run_bundle(std::shared_ptr<const PathSimulator> sim,
                      std::size_t n_paths, const SimOptions& options) {
  const double values = static_cast<double>(n_paths) * sim->players() *
                        static_cast<double>(sim->grid().size());
  if (values > static_cast<double>(options.max_state_values)) {
    throw Error(ErrorCode::kOutOfMemory,
                fmt::format("{} paths x {} players x {} grid points exceeds "
                            "the cap of {} stored values",
                            n_paths, sim->players(), sim->grid().size(),
                            options.max_state_values));
  }
  auto paths = map_indexed(n_paths, options.threads,
                           [&](std::size_t p) { return sim->simulate(p); });
  return PathBundle{sim,       sim->params().fingerprint(), sim->grid(),
                    sim->seed(), n_paths, std::move(paths)};
}

}  // namespace

PathBundle simulate_nplayer(const ModelParams& params,
                            const StrategySpec& strategy,
                            std::shared_ptr<const FeedbackGain> gain,
                            const TimeGrid& grid, std::uint64_t seed,
                            std::size_t n_paths, const SimOptions& options) {
  auto sim = std::make_shared<const PathSimulator>(
      PathSimulator::nplayer(params, strategy, std::move(gain), grid, seed));
  return run_bundle(std::move(sim), n_paths, options);
}

PathBundle simulate_limit(const ModelParams& params,
                          std::shared_ptr<const FeedbackGain> gain,
                          std::vector<double> m, const TimeGrid& grid,
                          std::uint64_t seed, std::size_t n_paths,
                          Strategy strategy, const SimOptions& options) {
  auto sim = std::make_shared<const PathSimulator>(PathSimulator::limit(
      params, strategy, std::move(gain), std::move(m), grid, seed));
  return run_bundle(std::move(sim), n_paths, options);
}

std::vector<double> path_average_on_grid(const SamplePath& path) {
  std::vector<double> avg(path.grid_nodes.size());
  for (std::size_t j = 0; j < avg.size(); ++j) {
    const std::size_t node = path.grid_nodes[j];
    double sum = 0.0;
    for (int i = 0; i < path.players; ++i) sum += path.state(node, i);
    avg[j] = sum / path.players;
  }
  return avg;
}

MeanFlow mean_flow_from_averages(
    const TimeGrid& grid, const std::vector<std::vector<double>>& averages) {
  if (averages.empty()) {
    throw Error(ErrorCode::kEmptyBundle, "no paths");
  }
  const std::size_t points = grid.size();
  const auto count = static_cast<double>(averages.size());
  MeanFlow flow{grid, std::vector<double>(points, 0.0),
                std::vector<double>(points, 0.0)};
  for (const auto& a : averages) {
    if (a.size() != points) {
      throw Error(ErrorCode::kGridMismatch, "path average length mismatch");
    }
    for (std::size_t j = 0; j < points; ++j) flow.mean[j] += a[j];
  }
  for (auto& m : flow.mean) m /= count;
  if (averages.size() > 1) {
    for (std::size_t j = 0; j < points; ++j) {
      double ss = 0.0;
      for (const auto& a : averages) {
        const double d = a[j] - flow.mean[j];
        ss += d * d;
      }
      flow.std_error[j] = std::sqrt(ss / (count - 1.0) / count);
    }
  }
  return flow;
}

MeanFlow empirical_mean_flow(const PathBundle& bundle) {
  if (bundle.paths.empty()) {
    throw Error(ErrorCode::kEmptyBundle, "bundle has no paths");
  }
  std::vector<std::vector<double>> averages;
  averages.reserve(bundle.paths.size());
  for (const auto& p : bundle.paths) averages.push_back(path_average_on_grid(p));
  return mean_flow_from_averages(bundle.grid, averages);
}

void write_paths_csv(std::ostream& out, const PathBundle& bundle) {
  out << "path,t,player,x\n";
  for (std::size_t p = 0; p < bundle.paths.size(); ++p) {
    const SamplePath& path = bundle.paths[p];
    for (std::size_t node = 0; node < path.node_count(); ++node) {
      const std::string t = csv_number(path.times[node]);
      if (path.jumper[node] >= 0) {
        for (int i = 0; i < path.players; ++i) {
          out << p << ',' << t << ',' << i << ','
              << csv_number(path.left_limit(node, i)) << '\n';
        }
      }
      for (int i = 0; i < path.players; ++i) {
        out << p << ',' << t << ',' << i << ','
            << csv_number(path.state(node, i)) << '\n';
      }
    }
  }
}

void write_events_csv(std::ostream& out, const PathBundle& bundle) {
  out << "path,player,time,gamma\n";
  for (const auto& path : bundle.paths) {
    for (const auto& e : path.events) {
      out << e.path << ',' << e.player << ',' << csv_number(e.time) << ','
          << csv_number(e.gamma) << '\n';
    }
  }
}

}  // namespace ibmfg
