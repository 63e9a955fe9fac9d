#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace bcsim {

// xoshiro256++ seeded via splitmix64. Self-contained so that streams are
// reproducible independent of the standard library implementation. Each run
// has one master seed; subsystems draw from substreams derived by fixed
// labels, which keeps their draws independent of module ordering.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t z = seed;
    for (auto& word : state_) {
      word = splitmix64(z);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  /// Gaussian via Box-Muller; one fresh pair of uniforms per call.
  double normal(double mean, double stddev) {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
  }

  /// Substream for a subsystem, derived from this stream's original seed and
  /// a fixed label. Stable no matter how far this stream has advanced.
  Rng substream(std::string_view label) const {
    uint64_t h = 0xcbf29ce484222325ULL ^ seed_;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return Rng(h);
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t seed_ = 0;
  uint64_t state_[4];
};

}  // namespace bcsim
