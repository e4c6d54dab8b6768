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
#include <string_view>
#include <vector>

#include "ibmfg/equilibrium.h"
#include "ibmfg/model_params.h"
#include "ibmfg/time_grid.h"

namespace ibmfg {

// One player's rule for the jump size at its trading times, as a function of
// the gain psi(t) and the left-limit deviation d = reference - x.
class Strategy {
 public:
  enum class Kind { kEquilibrium, kScaled, kZero, kConstant };

  static Strategy equilibrium() { return Strategy(Kind::kEquilibrium, 1.0); }
  static Strategy scaled(double factor);
  static Strategy zero() { return Strategy(Kind::kZero, 0.0); }
  static Strategy constant(double value);

  // Accepts `equilibrium`, `zero`, `scaled:<factor>`, `constant:<value>`.
  static Strategy parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }

  double control(double psi, double deviation) const noexcept {
    switch (kind_) {
      case Kind::kEquilibrium: return psi * deviation;
      case Kind::kScaled: return parameter_ * psi * deviation;
      case Kind::kZero: return 0.0;
      case Kind::kConstant: return parameter_;
    }
    return 0.0;
  }

  std::string describe() const;
  bool operator==(const Strategy&) const = default;

 private:
  Strategy(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

// Exactly one Strategy per player.
struct StrategySpec {
  std::vector<Strategy> players;

  static StrategySpec all_equilibrium(int n);
  static StrategySpec uniform(int n, Strategy strategy);
  StrategySpec with(int player, Strategy strategy) const;
  bool is_all_equilibrium() const;
};

struct JumpEvent {
  std::size_t path;
  int player;
  double time;
  double gamma;
};

// One simulated path. Nodes are the grid points merged with the jump times;
// `states` holds right limits, row-major by node. At a jump node the jumping
// player's left limit is its right limit minus `jump_size[node]`.
struct SamplePath {
  int players = 0;
  std::vector<double> times;
  std::vector<int> jumper;  // -1 at pure grid nodes
  std::vector<double> jump_size;
  std::vector<double> states;
  std::vector<std::size_t> grid_nodes;  // node index of each grid point
  std::vector<JumpEvent> events;

  std::size_t node_count() const noexcept { return times.size(); }
  double state(std::size_t node, int player) const noexcept {
    return states[node * players + player];
  }
  double left_limit(std::size_t node, int player) const noexcept {
    const double x = state(node, player);
    return jumper[node] == player ? x - jump_size[node] : x;
  }
};

struct SimOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  // OUT_OF_MEMORY when n_paths * players * grid points exceeds this.
  std::size_t max_state_values = 25'000'000;
};

// Everything needed to replay one Monte Carlo experiment path by path.
class PathSimulator {
 public:
  // n-player system. `gain` may be empty only if no player uses a
  // gain-dependent strategy.
  static PathSimulator nplayer(const ModelParams& params, StrategySpec strategy,
                               std::shared_ptr<const FeedbackGain> gain,
                               const TimeGrid& grid, std::uint64_t seed);

  // Representative player of the limit game, tracking the mean flow `m`
  // given on `grid`.
  static PathSimulator limit(const ModelParams& params, Strategy strategy,
                             std::shared_ptr<const FeedbackGain> gain,
                             std::vector<double> m, const TimeGrid& grid,
                             std::uint64_t seed);

  SamplePath simulate(std::size_t path) const;

  const ModelParams& params() const noexcept { return params_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  const StrategySpec& strategy() const noexcept { return strategy_; }
  const FeedbackGain* gain() const noexcept { return gain_.get(); }
  std::shared_ptr<const FeedbackGain> shared_gain() const { return gain_; }
  const std::vector<double>& mean_target() const noexcept { return m_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int players() const noexcept { return players_; }
  bool is_limit() const noexcept { return limit_; }

  double psi(double t) const { return gain_ ? gain_->at(t) : 0.0; }
  // Reference level the deviation is measured against: the empirical mean
  // for n players, m(t) for the limit player.
  double reference(double t, const double* x) const;

 private:
  PathSimulator(const ModelParams& params, StrategySpec strategy,
                std::shared_ptr<const FeedbackGain> gain, std::vector<double> m,
                const TimeGrid& grid, std::uint64_t seed, int players,
                bool limit);

  ModelParams params_;
  StrategySpec strategy_;
  std::shared_ptr<const FeedbackGain> gain_;
  std::vector<double> m_;
  TimeGrid grid_;
  std::uint64_t seed_;
  int players_;
  bool limit_;
};

struct PathBundle {
  std::shared_ptr<const PathSimulator> simulator;
  std::uint64_t params_hash;
  TimeGrid grid;
  std::uint64_t seed;
  std::size_t n_paths;
  std::vector<SamplePath> paths;

  std::vector<JumpEvent> events() const;
};

PathBundle simulate_nplayer(const ModelParams& params,
                            const StrategySpec& strategy,
                            std::shared_ptr<const FeedbackGain> gain,
                            const TimeGrid& grid, std::uint64_t seed,
                            std::size_t n_paths, const SimOptions& options = {});

// `m` defaults to the initial mean when empty.
PathBundle simulate_limit(const ModelParams& params,
                          std::shared_ptr<const FeedbackGain> gain,
                          std::vector<double> m, const TimeGrid& grid,
                          std::uint64_t seed, std::size_t n_paths,
                          Strategy strategy = Strategy::equilibrium(),
                          const SimOptions& options = {});

// Cross-path mean of the state at each grid time (averaged over players for
// n-player bundles) and its standard error over paths.
struct MeanFlow {
  TimeGrid grid;
  std::vector<double> mean;
  std::vector<double> std_error;
};

// Per-path average over players at each grid point.
std::vector<double> path_average_on_grid(const SamplePath& path);

MeanFlow empirical_mean_flow(const PathBundle& bundle);
// Same statistic from per-path averages (as produced by
// path_average_on_grid), for streamed runs.
MeanFlow mean_flow_from_averages(const TimeGrid& grid,
                                 const std::vector<std::vector<double>>& averages);

// `path,t,player,x`; at a jump node the left limits are written before the
// right limits.
void write_paths_csv(std::ostream& out, const PathBundle& bundle);
// `path,player,time,gamma`.
void write_events_csv(std::ostream& out, const PathBundle& bundle);

}  // namespace ibmfg
