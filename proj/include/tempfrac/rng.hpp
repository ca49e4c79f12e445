#pragma once

#include <array>
#include <cstdint>

namespace tempfrac::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds.
Counter philox4x32(Counter ctr, Key key);

/// Stateless generator: every draw is a pure function of
/// (seed, path, stream, index), so parallel schedules cannot change results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  // Two uniforms in the open interval (0, 1), 53-bit resolution.
  std::array<double, 2> uniforms(std::uint64_t path, std::uint32_t stream, std::uint32_t index) const;

  // One standard normal (Box-Muller, cosine branch).
  double normal(std::uint64_t path, std::uint32_t stream, std::uint32_t index) const;

 private:
  Key key_;
};

}  // namespace tempfrac::rng
