#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace eal {

// Deterministic random source.  mt19937_64 generates a portable bit stream,
// but the std distributions do not promise identical output across standard
// library implementations, so uniform / shuffle / normal are hand-rolled here.
// Child streams are derived with a splitmix64 hash so that (seed, stream)
// pairs give statistically independent, reproducible generators.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static Rng child(uint64_t seed, uint64_t stream) {
    return Rng(mix(mix(seed) ^ mix(stream + 0x632be59bd9b4e019ULL)));
  }

  uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling; n must be > 0.
  uint64_t uniform_below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  size_t index(size_t n) { return static_cast<size_t>(uniform_below(n)); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller without caching: deterministic and stateless per call.
  double normal(double mean = 0.0, double stdev = 1.0) {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stdev * z;
  }

  // Fisher-Yates, identical order on every platform.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eal
