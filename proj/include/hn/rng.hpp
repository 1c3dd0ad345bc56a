#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "hn/error.hpp"

namespace hn {

// Deterministic counter-based pseudorandom stream (splitmix64 core).
//
// Every random quantity in the library is drawn from a stream derived from a
// 64-bit root seed and a textual label (plus optional integer refinements),
// so any sub-experiment can be reproduced in isolation. The contract is
// bit-exact reproducibility for a fixed seed and library version; streams are
// not stable across versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all
    // uses, and the same stream must reproduce across platforms anyway.
    return next_u64() % n;
  }

  // Number of successes before the first failure when each trial succeeds
  // with probability p: P(k) = p^k (1-p), k >= 0.
  int geometric(double p) {
    int k = 0;
    while (next_unit() < p) ++k;
    return k;
  }

  // Exact Poisson draw via the exponential race; O(mean) time.
  std::uint64_t poisson(double mean) {
    if (mean < 0) throw ParameterError("poisson: negative mean");
    double acc = 0.0;
    std::uint64_t count = 0;
    for (;;) {
      double u = next_unit();
      acc += -std::log1p(-u);  // Exp(1) variate; u < 1 always
      if (acc >= mean) return count;
      ++count;
    }
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}
}  // namespace detail

inline RngStream derive_stream(std::uint64_t seed, std::string_view label) {
  return RngStream(detail::mix64(seed ^ detail::fnv1a64(label)));
}
inline RngStream derive_stream(std::uint64_t seed, std::string_view label, std::uint64_t a) {
  return RngStream(detail::mix64(detail::mix64(seed ^ detail::fnv1a64(label)) + a));
}
inline RngStream derive_stream(std::uint64_t seed, std::string_view label, std::uint64_t a,
                               std::uint64_t b) {
  return RngStream(
      detail::mix64(detail::mix64(detail::mix64(seed ^ detail::fnv1a64(label)) + a) + b));
}

}  // namespace hn
