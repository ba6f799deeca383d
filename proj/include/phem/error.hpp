// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_ERROR_HPP
#define PHEM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace phem
{

enum class ErrorKind
{
  DimensionMismatch,
  SingularPencil,
  FeedthroughSingular,
  NoStableInvariantSubspace,
  IndefiniteSolution,
  NotFeasible,
  NotPositiveDefinite,
  SingularShift,
  StepFactorizationFailed,
  Unstable,
  NonzeroFeedthrough,
  FeedthroughMismatch,
  RankDeficient,
  ShiftSolveSingular,
  NotInInterior,
  NoInteriorPoint,
  ParseError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers branch without
// parsing messages.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace phem

#endif  // PHEM_ERROR_HPP
