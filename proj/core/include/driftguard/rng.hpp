#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace driftguard {

// Deterministic random source. Distributions are derived from raw mt19937_64
// draws instead of the <random> distribution adaptors, whose output is
// implementation-defined; streams are therefore stable across standard
// libraries for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n); n must be positive. Multiply-shift reduction.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  // Gamma(shape, 1) for small positive integer shapes, as a sum of
  // exponentials.
  double gamma_int(int shape) {
    double acc = 0.0;
    for (int i = 0; i < shape; ++i) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      acc -= std::log(u);
    }
    return acc;
  }

  double beta(int a, int b) {
    const double x = gamma_int(a);
    const double y = gamma_int(b);
    return x / (x + y);
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[bounded(i)]);
    }
  }

  // Derived stream keyed on the construction seed; independent of how many
  // draws this instance has already consumed.
  Rng fork(std::uint64_t stream) const { return Rng(mix(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

  // splitmix64-style mixer.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace driftguard
