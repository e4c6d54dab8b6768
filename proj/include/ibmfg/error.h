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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ibmfg {

enum class ErrorCode {
  kConvexityViolated,
  kNonpositive,
  kBadN,
  kBadConfig,
  kSingularity,
  kBlowup,
  kOutOfRange,
  kDimensionMismatch,
  kOutOfMemory,
  kEmptyBundle,
  kGridMismatch,
  kDegenerateK,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. Numerical failures that happen at a
// definite time (SINGULARITY, BLOWUP) carry that time.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<double> time = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> time() const noexcept { return time_; }

  // True for errors caused by the numerics rather than by the inputs.
  bool is_numerical() const noexcept;

 private:
  ErrorCode code_;
  std::optional<double> time_;
};

}  // namespace ibmfg
