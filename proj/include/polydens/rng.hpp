#pragma once

// Counter-based random numbers. Every (seed, stream) pair names an
// independent sequence, so parallel chunks can be generated in any order
// and still reproduce the sequential result bit for bit.
//
// Generator: Philox4x32-10 (Salmon et al., Random123). Normal variates use
// the inverse CDF (Wichura's AS241, PPND16) applied to open-interval
// uniforms built from 53 random bits.

#include <array>
#include <cstdint>

namespace polydens {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buf_{};
  unsigned pos_ = 4;
};

/// Standard normal quantile; p must lie in (0, 1).
double normal_quantile(double p) noexcept;

/// SplitMix64 finalizer, used to derive sub-seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

}  // namespace polydens
