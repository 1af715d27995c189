// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace irs {

enum class ErrorCode {
  InvalidArgument,
  NotPositiveDefinite,
  NotHermitian,
  RankTooHigh,
  ZeroChannel,
  InfeasiblePoint,
  SingularSystem,
  LineSearchStalled,
  BracketFailure,
  IterationCap,
  InfeasibleQoS,
  NoNullSpace,
  InsufficientPower,
  InvariantViolation,
  Io,
};

std::string_view to_string(ErrorCode code);

/// All solver and I/O failures surface as this exception; `code()` carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace irs
