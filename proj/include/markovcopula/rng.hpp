#pragma once

#include <cmath>
#include <cstdint>

namespace markovcopula {

// Portable seeded randomness for the simulation engine. Two named, published
// algorithms with fully documented state transitions, so any implementation
// of this interface reproduces the same streams from the same seeds:
//
//  * SplitMix64 (Steele/Lea/Vigna): state advances by the 64-bit golden-ratio
//    constant 0x9E3779B97F4A7C15; each output is the new state passed through
//    the murmur-style finalizer with multipliers 0xBF58476D1CE4E5B9 and
//    0x94D049BB133111EB and shifts 30/27/31. Used only for seeding.
//
//  * xoshiro256++ (Blackman/Vigna): 256-bit state s[0..3]; output is
//    rotl(s[0]+s[3], 23) + s[0]; the transition xors the words as below and
//    rotates s[3] by 45. Used for all sampling draws.
//
// Each path gets its own stream: the (seed, path_index) pair is avalanched
// through the 64-bit finalizer, and the result seeds a SplitMix64 run that
// fills the xoshiro state. Streams for different path indices therefore share
// no seeding structure.

namespace rng_detail {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// Murmur3/SplitMix-style 64-bit finalizer (a bijection on 64-bit words).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

}  // namespace rng_detail

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (std::uint64_t& word : s_) word = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next() {
    using rng_detail::rotl;
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform draw in [0, 1): the top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform draw in the open interval (0, 1): bin midpoints of the 53-bit
  // grid, so neither endpoint can occur.
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Strictly positive unit-rate exponential draw.
  double exponential() { return -std::log(uniform_open()); }

 private:
  std::uint64_t s_[4];
};

// The independent per-path stream: avalanche the pair, then expand.
inline Xoshiro256pp path_stream(std::uint64_t seed, std::uint64_t path_index) {
  using rng_detail::mix64;
  return Xoshiro256pp(mix64(seed) ^ mix64(path_index + 0x9E3779B97F4A7C15ull));
}

}  // namespace markovcopula
