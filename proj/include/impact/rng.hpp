#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace impact {

// Deterministic 64-bit generator (splitmix64, Steele et al.). Chosen over
// std::mt19937 so that shuffles and synthetic data are bit-identical across
// platforms and standard library versions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index in [0, n). Modulo is biased for n not a power of two; the bias is
  // below 2^-50 for every n this library uses and the mapping is stable,
  // which is what reproducible splits need.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  // Box-Muller. One value per call; the mate is discarded to keep the
  // output stream a pure function of the call index.
  double gaussian(double mean = 0.0, double std = 1.0) {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    return mean + std * z;
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used for input-file content hashes in reports and for seed
// derivation tags.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

// Per-stage seed fan-out: every pipeline stage draws from its own stream,
// derived as splitmix(root ^ fnv1a(tag)). Stages stay individually
// reproducible no matter what ran before them.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stage_tag) {
  return SplitMix64(root ^ fnv1a64(stage_tag)).next();
}

// Seeded Fisher-Yates over 0..n-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace impact
