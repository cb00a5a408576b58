#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace hinn {

// SplitMix64 step: expands a 64-bit seed into well-mixed generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed-splitting: child seed = hash2(parent seed, index).
// Parallel workers each get their own stream and never share an Rng.
inline std::uint64_t hash2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64(s);
  s = h ^ b;
  return splitmix64(s);
}

// xoshiro256**: fast, high-quality, and trivially portable — the same seed
// produces the same stream on every platform, which the whole artifact's
// reproducibility story depends on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box–Muller; draws exactly two uniforms per call. u1 is taken from (0, 1]
  // so the log never sees zero.
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    return mean + stddev * z;
  }

  // Fisher–Yates. Modulo bias is ~n/2^64 — irrelevant for the sizes here,
  // and the fixed draw pattern keeps shuffles reproducible.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Child generator for parallel work; derived from the original seed, not
  // the current state, so it does not depend on how much of this stream was
  // consumed before the split.
  Rng child(std::uint64_t index) const { return Rng(hash2(seed_, index)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace hinn
