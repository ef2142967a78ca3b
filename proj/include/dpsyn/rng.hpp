#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dpsyn {

// Seeded PRNG wrapper. All randomness in the library flows through this
// class so that a run is reproducible bit-for-bit from its seed. The engine
// is std::mt19937_64, whose output sequence is fixed by the standard, and
// all variate transforms are written out explicitly (no std::*_distribution,
// whose algorithms are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, spelled out for cross-platform determinism.
  double gaussian(double mean, double stddev);

  // Independent stream for a parallel replication.
  Rng derive(std::uint64_t run_index) const { return Rng(seed_ ^ run_index); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline double Rng::gaussian(double mean, double stddev) {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace dpsyn
