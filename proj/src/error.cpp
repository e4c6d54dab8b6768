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

#include "ibmfg/error.h"

namespace ibmfg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConvexityViolated: return "CONVEXITY_VIOLATED";
    case ErrorCode::kNonpositive: return "NONPOSITIVE";
    case ErrorCode::kBadN: return "BAD_N";
    case ErrorCode::kBadConfig: return "BAD_CONFIG";
    case ErrorCode::kSingularity: return "SINGULARITY";
    case ErrorCode::kBlowup: return "BLOWUP";
    case ErrorCode::kOutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kOutOfMemory: return "OUT_OF_MEMORY";
    case ErrorCode::kEmptyBundle: return "EMPTY_BUNDLE";
    case ErrorCode::kGridMismatch: return "GRID_MISMATCH";
    case ErrorCode::kDegenerateK: return "DEGENERATE_K";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<double> time)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      time_(time) {}

bool Error::is_numerical() const noexcept {
  switch (code_) {
    case ErrorCode::kSingularity:
    case ErrorCode::kBlowup:
    case ErrorCode::kDegenerateK:
    case ErrorCode::kOutOfMemory:
      return true;
    default:
      return false;
  }
}

}  // namespace ibmfg
