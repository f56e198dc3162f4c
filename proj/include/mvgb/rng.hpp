#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

namespace mvgb {

// SplitMix64. Every random draw in the library flows from one of these,
// seeded from a master seed; no system entropy anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n).
  int next_index(int n) { return static_cast<int>(next_double() * n); }

  // Index into a discrete distribution given by probabilities summing to ~1.
  int next_categorical(const std::vector<double>& probs) {
    double u = next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Box-Muller, one value per call (the paired value is discarded so the
  // stream position is independent of how results are consumed).
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_double() * i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Replicate stream derivation: stream_i = SplitMix64(master_seed ^ i).
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t i) {
  return SplitMix64(master_seed ^ i).next();
}

}  // namespace mvgb
