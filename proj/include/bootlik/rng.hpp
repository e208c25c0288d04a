#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bootlik {

/// Counter-based random stream identified by (root seed, path of labels).
///
/// Streams with the same identity replay the same draw sequence; streams on
/// distinct paths share no state, so replicate-level code can derive one
/// stream per task and run in any order or thread count without changing
/// results. Core generator is SplitMix64 over a per-stream key.
class RngStream {
 public:
  explicit RngStream(std::uint64_t root_seed)
      : key_(finalize(root_seed ^ 0x6a09e667f3bcc909ull)), ctr_(key_) {}

  /// Child stream for the path extended by `label`. Derivation uses the
  /// stream identity, not the draw position, so children are stable no
  /// matter how many values the parent has produced.
  RngStream child(std::uint64_t label) const {
    RngStream s(*this);
    s.key_ = finalize(key_ + 0x9e3779b97f4a7c15ull * (label + 1));
    s.ctr_ = s.key_;
    s.have_spare_ = false;
    return s;
  }

  std::uint64_t next_u64() {
    ctr_ += 0x9e3779b97f4a7c15ull;
    return finalize(ctr_);
  }

  /// Uniform on (0,1].
  double next_double() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [a,b).
  double uniform(double a, double b) {
    return a + (b - a) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0,n).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t threshold = (-n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal via Box-Muller (pair cached).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double();
    const double u2 = uniform(0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double next_exponential(double rate = 1.0) {
    if (!(rate > 0.0)) throw std::invalid_argument("next_exponential: rate must be positive");
    return -std::log(next_double()) / rate;
  }

  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

  /// Poisson count, Knuth product method with exponential-stride rescue for
  /// large means.
  std::uint64_t next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("next_poisson: mean must be nonnegative");
    std::uint64_t total = 0;
    while (mean > 32.0) {
      // split: Poisson(m) = Poisson(m/2) + Poisson(m/2)
      const double half = mean * 0.5;
      total += next_poisson_small(half);
      mean -= half;
    }
    return total + next_poisson_small(mean);
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next_poisson_small(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = next_double();
    while (prod > limit) {
      ++k;
      prod *= next_double();
    }
    return k;
  }

  std::uint64_t key_;
  std::uint64_t ctr_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bootlik
