/** @file random.hpp
 *  Seeded random streams. A stream is fixed by (seed, index) so parallel
 *  samples reproduce regardless of scheduling.
 */
#pragma once

#include <cstdint>
#include <random>

namespace osk {

class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x6f736bu};
    eng_.seed(seq);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0,n).
  int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
  std::uint64_t next() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

}  // namespace osk
