#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace egc::detail {

/// Thin deterministic wrapper around mt19937_64. Variate generation is
/// hand-rolled so sequences do not depend on library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in (0, 1]
    return ((eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = eng_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace egc::detail
