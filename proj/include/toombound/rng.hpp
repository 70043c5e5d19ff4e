#pragma once

#include <cstdint>

namespace toombound {

// Counter-based randomness: every (seed, trial, step, site) gets its own
// uniform word, so trials and sites can be visited in any order or in
// parallel without changing the outcome.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// The (seed, trial, step) part of the counter; hoisted out of site loops.
inline std::uint64_t counter_prefix(std::uint64_t seed, std::uint64_t trial, std::uint64_t step) {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ trial);
  return mix64(h ^ step);
}

inline std::uint64_t counter_word(std::uint64_t prefix, std::uint64_t site) { return mix64(prefix ^ site); }

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t trial, std::uint64_t step, std::uint64_t site) {
  return counter_word(counter_prefix(seed, trial, step), site);
}

/// Bernoulli(p) on top of a uniform 64-bit word: hit iff word < p * 2^64.
/// Sharing the words across p gives the monotone coupling.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(double p) {
    if (p >= 1.0) {
      all_ = true;
    } else if (p > 0.0) {
      thr_ = static_cast<std::uint64_t>(p * 18446744073709551616.0);
    }
  }
  bool hit(std::uint64_t word) const { return all_ || word < thr_; }

 private:
  bool all_ = false;
  std::uint64_t thr_ = 0;
};

}  // namespace toombound
