#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polydens {

enum class Errc {
  ZeroPolynomial,
  DimensionMismatch,
  DimensionTooSmall,
  IndexOutOfRange,
  ZeroScale,
  DegreeExceedsM,
  DegenerateRange,
  UnsupportedKind,
  EpsilonBelowResolution,
  ZeroVariance,
  GridMismatch,
  NonpositiveDistance,
  InsufficientDecay,
  InvalidArgument,
  InvalidInput,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace polydens
