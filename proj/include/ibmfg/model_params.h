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

#include <cstdint>
#include <string>
#include <string_view>

namespace ibmfg {

// Number of players; either a finite count or the mean-field limit.
class PlayerCount {
 public:
  static PlayerCount finite(long long n) { return PlayerCount(n); }
  static PlayerCount infinite() { return PlayerCount(0); }

  bool is_infinite() const noexcept { return n_ == 0; }
  long long value() const noexcept { return n_; }
  // 1/n, zero in the limit.
  double inverse() const noexcept {
    return is_infinite() ? 0.0 : 1.0 / static_cast<double>(n_);
  }

  std::string to_string() const;
  bool operator==(const PlayerCount&) const = default;

 private:
  explicit PlayerCount(long long n) : n_(n) {}
  long long n_;
};

// i.i.d. initial reserves: a point mass at `mean` when std == 0, otherwise
// Gaussian.
struct InitialLaw {
  double mean = 0.0;
  double std = 0.0;

  bool is_point_mass() const noexcept { return std == 0.0; }
  bool is_centered() const noexcept { return mean == 0.0; }
  bool operator==(const InitialLaw&) const = default;
};

// Unvalidated parameter record. Defaults are the typical-scenario set
// (n=10, T=2, a=1, sigma=0.8, theta=1, eps=10, c=0, lambda=1.2, X0=0).
struct RawParams {
  PlayerCount n_players = PlayerCount::finite(10);
  double horizon = 2.0;
  double mean_reversion = 1.0;
  double volatility = 0.8;
  double incentive = 1.0;
  double running_penalty = 10.0;
  double terminal_penalty = 0.0;
  double intensity = 1.2;
  InitialLaw initial_law{};

  bool operator==(const RawParams&) const = default;
};

// Validated model inputs. Only obtainable through validate(), so every
// instance satisfies theta^2 <= eps, T, eps, lambda > 0, sigma, c, a >= 0
// and n >= 2 when finite.
class ModelParams {
 public:
  static ModelParams validate(const RawParams& raw);

  PlayerCount n_players() const noexcept { return raw_.n_players; }
  bool is_limit() const noexcept { return raw_.n_players.is_infinite(); }
  double horizon() const noexcept { return raw_.horizon; }
  double mean_reversion() const noexcept { return raw_.mean_reversion; }
  double volatility() const noexcept { return raw_.volatility; }
  double incentive() const noexcept { return raw_.incentive; }
  double running_penalty() const noexcept { return raw_.running_penalty; }
  double terminal_penalty() const noexcept { return raw_.terminal_penalty; }
  double intensity() const noexcept { return raw_.intensity; }
  const InitialLaw& initial_law() const noexcept { return raw_.initial_law; }

  // 1 - 1/n, equal to 1 in the limit.
  double one_minus_inv_n() const noexcept {
    return 1.0 - raw_.n_players.inverse();
  }
  // Finite player count; throws BAD_N in the limit.
  int player_count() const;

  const RawParams& raw() const noexcept { return raw_; }

  // Stable 64-bit fingerprint (FNV-1a over the canonical text form).
  std::uint64_t fingerprint() const;
  // Canonical `key = value` text, one key per line, in config-file order.
  std::string to_text() const;

  bool operator==(const ModelParams&) const = default;

 private:
  explicit ModelParams(const RawParams& raw) : raw_(raw) {}
  RawParams raw_;
};

// Same parameters with n replaced by the mean-field limit.
ModelParams limit_of(const ModelParams& params);

// Reads a flat YAML mapping whose keys are exactly
// n, T, a, sigma, theta, eps, c, lambda, x0_mean, x0_std. Absent keys keep
// their defaults; unknown keys are a BAD_CONFIG error.
RawParams load_config(const std::string& path);
RawParams parse_config(std::string_view text);

// Applies one `key=value` override. `n` accepts `inf`.
void apply_override(RawParams& raw, std::string_view assignment);
void set_param(RawParams& raw, std::string_view key, std::string_view value);

}  // namespace ibmfg
