// Copyright 2026 The faster-sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FASTER_ERROR_HPP
#define FASTER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace faster {

enum class ErrorCode {
  kInvalidReference,
  kInvalidRoute,
  kCoalitionTooLarge,
  kOracleTooLarge,
  kInvalidNode,
  kInvalidArgument,
  kNonPositivePayoff,
  kCannotAfford,
  kNotAHop,
  kDoubleClaim,
  kParse,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidReference: return "invalid-reference";
    case ErrorCode::kInvalidRoute: return "invalid-route";
    case ErrorCode::kCoalitionTooLarge: return "coalition-too-large";
    case ErrorCode::kOracleTooLarge: return "oracle-too-large";
    case ErrorCode::kInvalidNode: return "invalid-node";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNonPositivePayoff: return "non-positive-payoff";
    case ErrorCode::kCannotAfford: return "cannot-afford";
    case ErrorCode::kNotAHop: return "not-a-hop";
    case ErrorCode::kDoubleClaim: return "double-claim";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace faster

#endif  // FASTER_ERROR_HPP
