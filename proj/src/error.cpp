#include "polydens/error.hpp"

namespace polydens {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::DegreeExceedsM: return "DegreeExceedsM";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::UnsupportedKind: return "UnsupportedKind";
    case Errc::EpsilonBelowResolution: return "EpsilonBelowResolution";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NonpositiveDistance: return "NonpositiveDistance";
    case Errc::InsufficientDecay: return "InsufficientDecay";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace polydens
