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

#include "ibmfg/time_grid.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ibmfg/error.h"

namespace ibmfg {

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), dt_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::kNonpositive,
                fmt::format("grid horizon {} must be positive", horizon));
  }
  if (steps < 2) {
    throw Error(ErrorCode::kBadConfig,
                fmt::format("grid needs at least 2 steps, got {}", steps));
  }
  dt_ = horizon / static_cast<double>(steps);
}

TimeGrid TimeGrid::with_step(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kNonpositive,
                fmt::format("time step {} must be positive", dt));
  }
  // Tolerate T/dt landing a hair above an integer.
  const double ratio = horizon / dt;
  auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
  return TimeGrid(horizon, std::max<std::size_t>(steps, 2));
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i];
  return out;
}

}  // namespace ibmfg
