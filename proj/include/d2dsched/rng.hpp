#ifndef D2DSCHED_RNG_HPP
#define D2DSCHED_RNG_HPP

#include <cmath>
#include <cstdint>

namespace d2dsched {

// splitmix64, used both as a stream seeder and as a counter-based hash.
// Counter hashing keeps every fading draw a pure function of
// (seed, realization, slot, pair), so results are independent of thread
// scheduling and job count.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return splitmix64(seed ^ (v + 0x9e3779b97f4a7c15ULL));
}

// xoshiro256** stream generator. Not std::mt19937_64: we need the exact
// bit stream pinned so frozen test values and byte-identical CSV outputs
// survive standard-library changes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x = splitmix64(x);
      w = x;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with unit mean via inverse CDF.
  double exp_unit() { return -std::log1p(-uniform()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// One unit-mean exponential draw as a pure function of its coordinates.
inline double counter_exp(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = hash_combine(hash_combine(hash_combine(seed, a), b), c);
  double u = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
  return -std::log1p(-u);
}

}  // namespace d2dsched

#endif  // D2DSCHED_RNG_HPP
