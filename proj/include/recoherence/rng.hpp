#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace recoherence {

// SplitMix64: deterministic, splittable, identical on every platform.
// All stochastic output in the library flows through this generator so
// that a recorded seed reproduces runs bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derive an independent stream; the split constant keeps child streams
  // decorrelated from the parent sequence.
  SplitMix64 split() { return SplitMix64(next_u64() ^ 0x6a09e667f3bcc909ULL); }

  // Uniform on (0, 1]: 53-bit mantissa, never exactly zero.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  // Standard normal via Box-Muller; one draw per pair of uniforms so the
  // stream position is a pure function of the draw count.
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  static const char* name() { return "splitmix64+boxmuller"; }

 private:
  std::uint64_t state_;
};

} // namespace recoherence
