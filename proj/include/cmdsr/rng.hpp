#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cmdsr {

// SplitMix64 step; used for seed derivation.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random generator. The engine is std::mt19937_64 (fully
// specified by the standard); all floating-point transforms are implemented
// here explicitly so sampled values do not depend on the standard library's
// distribution objects.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // Independent stream derived from a root seed and a tag sequence, e.g.
  // Rng::derive(seed, {step, kStreamMeta}).
  static Rng derive(uint64_t root, std::initializer_list<uint64_t> stream) {
    uint64_t s = root;
    (void)splitmix64(s);
    for (uint64_t t : stream) {
      s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
      (void)splitmix64(s);
    }
    return Rng(splitmix64(s));
  }

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive, bias-free via rejection.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1ULL;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return lo + static_cast<int64_t>(r % span);
  }

  // Standard normal via Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * 3.14159265358979323846 * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cmdsr
