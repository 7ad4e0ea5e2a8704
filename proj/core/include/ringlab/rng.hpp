#pragma once

#include <cstdint>

namespace ringlab {

// splitmix64 step; also used as the avalanche mixer for seed derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed from a tuple of words.  Order sensitive.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64_next(s);
  s ^= b + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64_next(s);
  s ^= c + 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64_next(s);
  s ^= d + 0x165667b19e3779f9ULL;
  h ^= splitmix64_next(s);
  return h;
}

// Minimal deterministic generator.  Identical output on every platform,
// unlike the distributions in <random>.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

private:
  std::uint64_t state_;
};

}  // namespace ringlab
