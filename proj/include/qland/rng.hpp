#pragma once

#include <cstdint>
#include <random>

namespace qland {

// Mixes two 64-bit values into a well-spread seed (splitmix64 finalizer).
// Used to derive independent per-trial streams from (master_seed, trial_index)
// so that results do not depend on how trials are scheduled across threads.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Seeded random stream with explicit uniform mappings. The raw mt19937_64
// sequence is fixed by the standard, and the mappings below avoid
// std::uniform_real_distribution, whose output is implementation-defined.
// Streams are therefore bit-reproducible across platforms and compilers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(mix_seed(master_seed, trial_index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qland
