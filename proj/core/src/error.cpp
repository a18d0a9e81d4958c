#include "slip/error.hpp"

namespace slip {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::NotAscending: return "NotAscending";
    case ErrorKind::NoTouchdown: return "NoTouchdown";
    case ErrorKind::Fall: return "Fall";
    case ErrorKind::NoLiftoff: return "NoLiftoff";
    case ErrorKind::NonPositiveLength: return "NonPositiveLength";
    case ErrorKind::Overdamped: return "Overdamped";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::NoBottom: return "NoBottom";
    case ErrorKind::NoLiftoffSolution: return "NoLiftoffSolution";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::TooFewStrides: return "TooFewStrides";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::ZeroSweep: return "ZeroSweep";
    case ErrorKind::NoMinimum: return "NoMinimum";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::NoApexPair: return "NoApexPair";
  }
  return "Unknown";
}

}  // namespace slip
