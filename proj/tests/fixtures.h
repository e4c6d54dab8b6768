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

#include "ibmfg/model_params.h"

namespace ibmfg::testing {

// T=2, a=1, theta=1, eps=10, lambda=0.7, c=0 (phi convergence panel).
inline RawParams fig1_raw(long long n = 10) {
  RawParams raw;
  raw.n_players = PlayerCount::finite(n);
  raw.horizon = 2.0;
  raw.mean_reversion = 1.0;
  raw.incentive = 1.0;
  raw.running_penalty = 10.0;
  raw.terminal_penalty = 0.0;
  raw.intensity = 0.7;
  return raw;
}

inline ModelParams fig1(long long n = 10) {
  return ModelParams::validate(fig1_raw(n));
}

inline ModelParams fig1_limit() {
  auto raw = fig1_raw();
  raw.n_players = PlayerCount::infinite();
  return ModelParams::validate(raw);
}

// n=10, T=2, a=1, sigma=0.8, X0=0, theta=1, eps=10, c=0, lambda=1.2.
inline ModelParams fig2() { return ModelParams::validate(RawParams{}); }

// Sweep panels: n, c given; T=2, a=1, theta=1, eps=10.
inline ModelParams sweep(long long n, double c, double lambda) {
  RawParams raw = fig1_raw(n);
  raw.terminal_penalty = c;
  raw.intensity = lambda;
  return ModelParams::validate(raw);
}

inline ModelParams with(RawParams raw, auto&& edit) {
  edit(raw);
  return ModelParams::validate(raw);
}

}  // namespace ibmfg::testing
