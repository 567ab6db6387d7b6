#pragma once

#include <cstdint>

namespace qtmlab::rng {

// splitmix64; fixed algorithm, part of the reproducibility contract for
// sampled runs
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_;
};

// stream splitting for independent per-sample generators
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return SplitMix64(base + (index + 1) * 0x9E3779B97F4A7C15ULL).next();
}

}  // namespace qtmlab::rng
