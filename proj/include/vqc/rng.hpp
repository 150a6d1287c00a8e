#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace vqc {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Seeded random stream. Child streams are derived from (seed, key) only, so a
/// child's sequence never depends on how much of the parent was consumed or on
/// the order in which siblings are created.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  [[nodiscard]] Rng derive(std::uint64_t key) const {
    return Rng(mix64(seed_ ^ mix64(key ^ 0xA0761D6478BD642FULL)));
  }
  [[nodiscard]] Rng derive(std::string_view label) const { return derive(hash_label(label)); }
  [[nodiscard]] Rng derive(std::string_view label, std::uint64_t index) const {
    return derive(label).derive(index);
  }

  engine_type& engine() noexcept { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  /// Inclusive on both ends.
  long uniform_int(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(engine_);
  }
  double normal(double mean = 0.0, double sigma = 1.0) {
    if (sigma <= 0.0) {
      // Keep the stream position independent of sigma.
      std::normal_distribution<double>(0.0, 1.0)(engine_);
      return mean;
    }
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }
  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }
  double exponential(double mean) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<long>(mean)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    // Fisher-Yates with our own index draws so the permutation is fixed by the seed.
    for (auto n = last - first; n > 1; --n) {
      const auto j = uniform_int(0, static_cast<long>(n - 1));
      using std::swap;
      swap(first[n - 1], first[j]);
    }
  }

 private:
  std::uint64_t seed_;
  engine_type engine_;
};

}  // namespace vqc
