#pragma once

#include <cstdint>
#include <string_view>

#include "mh/types.hpp"

namespace mh {

// SplitMix64 scramble round.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Counter-based seed mixer. Per-trial seeds are
//   mix(mix(master_seed, trial_index), check_tag_hash)
// so the instance stream is a pure function of (config, trial, check).
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9E3779B97F4A7C15ULL + b * 0xBF58476D1CE4E5B9ULL));
}

// FNV-1a, used for check-name tags.
inline std::uint64_t tag_hash(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Deterministic generator with explicitly coded distributions, so that the
// sampled instance stream does not depend on the standard library build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi);

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1.0));
  }

  // standard normal via Box-Muller
  double gauss();

  // standard complex normal, E|z|^2 = 1
  Complex cgauss();

  // Exp(1)
  double exponential();

 private:
  std::uint64_t state_;
};

}  // namespace mh
