#pragma once

#include <cstdint>

namespace consim {

// SplitMix64 (Steele, Lea & Vigna; the reference constants below are the
// published ones). Used everywhere a seeded draw must reproduce bit-for-bit
// across platforms and compilers, which std::mt19937 distributions do not
// guarantee. State is a single 64-bit word; the full period is 2^64.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). Modulo bias is below 2^-50 for the
  // bounds used here (graph sizes), which is irrelevant for test inputs.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace consim
