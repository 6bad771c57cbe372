#pragma once

#include <cstdint>
#include <random>

namespace cslx {

/**
 * Seeded random stream with portable output.
 *
 * The engine is the standardized mt19937_64 seeded through std::seed_seq
 * from (seed, stream), so per-trial streams derived from (seed, trial index)
 * are reproducible regardless of execution order. Uniform and Poisson
 * variates are generated by hand (53-bit mantissa draw; Knuth product method
 * below mean 10, Hormann's PTRS transformed rejection above) instead of the
 * standard-library distributions, whose output is implementation-defined.
 */
class RandomStream {
 public:
  static constexpr const char* kAlgorithmId =
      "mt19937_64/seed_seq(seed,stream)+knuth-ptrs-poisson";

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform();

  // Exact Poisson variate with the given mean (mean >= 0).
  long long poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cslx
