// Seeded random streams. Every stochastic component draws from its own
// stream derived from a base seed, so runs are reproducible regardless of
// execution order or thread count. Transforms are coded explicitly
// (Box-Muller, inverse CDF) because the standard library's distribution
// objects do not promise a portable draw sequence.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace cerx {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Named sub-stream tags; keeps independent consumers off each other's draws.
namespace stream {
inline constexpr std::uint64_t kInit = 1;      // parameter initialization
inline constexpr std::uint64_t kTrain = 2;     // shuffling + dropout
inline constexpr std::uint64_t kLevelFit = 3;  // per-(iteration, level) model fits
inline constexpr std::uint64_t kAugment = 4;   // imputation draws
inline constexpr std::uint64_t kSplit = 5;     // train/test partition
inline constexpr std::uint64_t kCv = 6;        // cross-validation fits
inline constexpr std::uint64_t kBounds = 7;    // censoring bound draws
inline constexpr std::uint64_t kFit = 8;       // per-replication fit seed
}  // namespace stream

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform over {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
  }

  // Standard normal via Box-Muller; one draw consumes two engine outputs.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  double chi_square(unsigned df) {
    double s = 0.0;
    for (unsigned i = 0; i < df; ++i) {
      const double z = normal();
      s += z * z;
    }
    return s;
  }

  double student_t(unsigned df) {
    const double z = normal();
    const double v = chi_square(df);
    return z / std::sqrt(v / static_cast<double>(df));
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cerx
