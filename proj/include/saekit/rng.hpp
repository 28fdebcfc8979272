#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace saekit {

// splitmix64 finalizer, used for seed derivation only.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// All randomness flows from one global seed. Child seeds are derived as
// splitmix64(seed ^ fnv1a64(tag)), optionally mixed with an index, so every
// module has an independent, reproducible stream.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag) {
  return splitmix64(seed ^ fnv1a64(tag));
}

inline uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index) {
  return splitmix64(derive_seed(seed, tag) ^ splitmix64(index));
}

// Deterministic generator: std::mt19937_64 (bit-specified by the standard)
// with explicit output mappings, so streams are reproducible across
// platforms and standard library implementations.
//   uniform():  (next() >> 11) * 2^-53, in [0, 1)
//   normal():   Box-Muller on (1 - uniform(), uniform()), cosine branch
//               first, sine branch cached for the next call
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n) via rejection sampling.
  uint64_t uniform_index(uint64_t n) {
    const uint64_t bound = n == 0 ? 0 : (~uint64_t{0}) - ((~uint64_t{0}) % n + 1) % n;
    uint64_t x = next_u64();
    while (x > bound) x = next_u64();
    return x % n;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Fisher-Yates, descending index order.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<uint64_t> permutation(uint64_t n) {
    std::vector<uint64_t> p(n);
    for (uint64_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace saekit
