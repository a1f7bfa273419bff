// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace breather {

enum class ErrorKind {
  SignViolation,
  NotOddRational,
  PeriodMismatch,
  XiOutOfRange,
  DomainError,
  NonPositive,
  IndexOutOfRange,
  MatchingSingular,
  ProductDiverged,
  NoDecayingMultiplier,
  ExcludedViolation,
  NoWitness,
  Diverged,
  DegenerateElement,
  ExclusionDerivativeUnstable,
  MissingArtifact,
  ParseError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace breather
