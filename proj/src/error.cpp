// Copyright 2026 The sideobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sideobs/error.hpp"

namespace sideobs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kBudgetExceeded:
      return "budget-exceeded";
    case ErrorCode::kHorizonExceeded:
      return "horizon-exceeded";
    case ErrorCode::kProtocolViolation:
      return "protocol-violation";
    case ErrorCode::kDegenerateGraph:
      return "degenerate-graph";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace sideobs
