#include "tempfrac/rng.hpp"

#include <cmath>
#include <numbers>

namespace tempfrac::rng {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// (0, 1) from 53 bits: (k + 0.5) / 2^53.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t k = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

}  // namespace

Counter philox4x32(Counter c, Key k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::array<double, 2> CounterRng::uniforms(std::uint64_t path, std::uint32_t stream, std::uint32_t index) const {
  const Counter out = philox4x32(
      {index, stream, static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)}, key_);
  return {to_open_unit(out[0], out[1]), to_open_unit(out[2], out[3])};
}

double CounterRng::normal(std::uint64_t path, std::uint32_t stream, std::uint32_t index) const {
  const auto u = uniforms(path, stream, index);
  return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * std::numbers::pi * u[1]);
}

}  // namespace tempfrac::rng
