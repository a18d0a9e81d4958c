#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slip {

/// Failure categories raised by the library. Stride-level failures inside the
/// return map are reported through StrideStatus instead of exceptions.
enum class ErrorKind {
  InvalidArgument,
  DegenerateGeometry,
  NotAscending,
  NoTouchdown,
  Fall,
  NoLiftoff,
  NonPositiveLength,
  Overdamped,
  OutOfWindow,
  NoBottom,
  NoLiftoffSolution,
  ZeroNorm,
  TooFewStrides,
  EmptySeries,
  NonConvergent,
  ZeroSweep,
  NoMinimum,
  MalformedFile,
  NoApexPair,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace slip
