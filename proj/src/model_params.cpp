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

#include "ibmfg/model_params.h"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "ibmfg/error.h"

namespace ibmfg {

namespace {

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("key '{}': '{}' is not a finite number", key, text));
  }
  return value;
}

PlayerCount parse_players(std::string_view text) {
  if (text == "inf" || text == "INFINITE" || text == "infinite") {
    return PlayerCount::infinite();
  }
  long long n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("key 'n': '{}' is neither an integer nor 'inf'", text));
  }
  if (n < 2) {
    throw Error(ErrorCode::kBadN, fmt::format("n = {} (need n >= 2)", n));
  }
  return PlayerCount::finite(n);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string PlayerCount::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(n_);
}

ModelParams ModelParams::validate(const RawParams& raw) {
  const double values[] = {raw.horizon,         raw.mean_reversion,
                           raw.volatility,      raw.incentive,
                           raw.running_penalty, raw.terminal_penalty,
                           raw.intensity,       raw.initial_law.mean,
                           raw.initial_law.std};
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kBadConfig, "parameters must be finite");
    }
  }
  if (!raw.n_players.is_infinite() && raw.n_players.value() < 2) {
    throw Error(ErrorCode::kBadN,
                fmt::format("n = {} (need n >= 2)", raw.n_players.value()));
  }
  if (raw.horizon <= 0.0) {
    throw Error(ErrorCode::kNonpositive, fmt::format("T = {}", raw.horizon));
  }
  if (raw.running_penalty <= 0.0) {
    throw Error(ErrorCode::kNonpositive,
                fmt::format("eps = {}", raw.running_penalty));
  }
  if (raw.intensity <= 0.0) {
    throw Error(ErrorCode::kNonpositive,
                fmt::format("lambda = {}", raw.intensity));
  }
  if (raw.incentive <= 0.0) {
    throw Error(ErrorCode::kNonpositive,
                fmt::format("theta = {}", raw.incentive));
  }
  if (raw.mean_reversion < 0.0 || raw.volatility < 0.0 ||
      raw.terminal_penalty < 0.0 || raw.initial_law.std < 0.0) {
    throw Error(ErrorCode::kNonpositive,
                "a, sigma, c and x0_std must be nonnegative");
  }
  if (raw.incentive * raw.incentive > raw.running_penalty) {
    throw Error(ErrorCode::kConvexityViolated,
                fmt::format("theta^2 = {} > eps = {}",
                            raw.incentive * raw.incentive,
                            raw.running_penalty));
  }
  return ModelParams(raw);
}

int ModelParams::player_count() const {
  if (is_limit()) {
    throw Error(ErrorCode::kBadN, "finite n required, got n = inf");
  }
  return static_cast<int>(raw_.n_players.value());
}

std::string ModelParams::to_text() const {
  return fmt::format(
      "n = {}\nT = {:.17g}\na = {:.17g}\nsigma = {:.17g}\ntheta = {:.17g}\n"
      "eps = {:.17g}\nc = {:.17g}\nlambda = {:.17g}\nx0_mean = {:.17g}\n"
      "x0_std = {:.17g}\n",
      raw_.n_players.to_string(), raw_.horizon, raw_.mean_reversion,
      raw_.volatility, raw_.incentive, raw_.running_penalty,
      raw_.terminal_penalty, raw_.intensity, raw_.initial_law.mean,
      raw_.initial_law.std);
}

std::uint64_t ModelParams::fingerprint() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

ModelParams limit_of(const ModelParams& params) {
  RawParams raw = params.raw();
  raw.n_players = PlayerCount::infinite();
  return ModelParams::validate(raw);
}

void set_param(RawParams& raw, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "n") {
    raw.n_players = parse_players(value);
  } else if (key == "T") {
    raw.horizon = parse_double(key, value);
  } else if (key == "a") {
    raw.mean_reversion = parse_double(key, value);
  } else if (key == "sigma") {
    raw.volatility = parse_double(key, value);
  } else if (key == "theta") {
    raw.incentive = parse_double(key, value);
  } else if (key == "eps") {
    raw.running_penalty = parse_double(key, value);
  } else if (key == "c") {
    raw.terminal_penalty = parse_double(key, value);
  } else if (key == "lambda") {
    raw.intensity = parse_double(key, value);
  } else if (key == "x0_mean") {
    raw.initial_law.mean = parse_double(key, value);
  } else if (key == "x0_std") {
    raw.initial_law.std = parse_double(key, value);
  } else {
    throw Error(ErrorCode::kBadConfig, fmt::format("unknown key '{}'", key));
  }
}

void apply_override(RawParams& raw, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("override '{}' is not of the form key=value",
                            assignment));
  }
  set_param(raw, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RawParams parse_config(std::string_view text) {
  RawParams raw;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  if (root.IsNull()) return raw;
  if (!root.IsMap()) {
    throw Error(ErrorCode::kBadConfig, "config must be a flat key: value map");
  }
  for (const auto& entry : root) {
    if (!entry.second.IsScalar()) {
      throw Error(ErrorCode::kBadConfig,
                  fmt::format("key '{}' must have a scalar value",
                              entry.first.Scalar()));
    }
    set_param(raw, entry.first.Scalar(), entry.second.Scalar());
  }
  return raw;
}

RawParams load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kBadConfig, fmt::format("cannot open '{}'", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace ibmfg
