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
#include <vector>

namespace ibmfg {

// Uniform grid 0 = t_0 < t_1 < ... < t_M = T with M >= 2.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  // Grid with the largest uniform step not exceeding `dt`.
  static TimeGrid with_step(double horizon, double dt);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_ + 1; }
  double dt() const noexcept { return dt_; }

  // t_i; the last point is exactly the horizon.
  double operator[](std::size_t i) const noexcept {
    return i == steps_ ? horizon_ : static_cast<double>(i) * dt_;
  }
  std::vector<double> points() const;

  bool operator==(const TimeGrid& other) const noexcept {
    return horizon_ == other.horizon_ && steps_ == other.steps_;
  }

 private:
  double horizon_;
  std::size_t steps_;
  double dt_;
};

}  // namespace ibmfg
