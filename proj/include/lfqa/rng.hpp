#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lfqa {

/// Deterministic splitmix64 generator. Every randomized step in the library
/// draws from this type rather than <random> distributions, so identical seeds
/// give bit-identical results on any platform or thread count.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  /// Independent stream for (seed, index) pairs, e.g. one per protocol trial.
  static Rng fork(uint64_t seed, uint64_t index) {
    Rng mix(seed);
    uint64_t a = mix.next_u64();
    Rng step(a + 0x9e3779b97f4a7c15ULL * (index + 1));
    return Rng(step.next_u64());
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  /// Box-Muller normal deviate.
  double normal(double mu = 0.0, double sigma = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mu + sigma * spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mu + sigma * r * std::cos(a);
  }

  /// Fisher-Yates shuffle, drawing indices from this stream.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lfqa
