#pragma once

#include <cmath>
#include <cstdint>

// Counter-style keyed randomness. Every random decision in a run is a pure
// hash of (seed, stream, round, vertex, attempt), so the outcome of a round
// does not depend on vertex iteration order or on how work is split across
// threads, and a run can be replayed bit-exactly from its seed alone.
namespace beepmis::rng {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
constexpr uint64_t mix(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Independent purposes draw from independent streams of one run seed.
enum class Stream : uint64_t {
  BeepCh1 = 1,
  InitLevels = 2,
  FaultSelect = 3,
  FaultLevel = 4,
  GraphGen = 5,
  Generic = 6,
};

struct Key {
  uint64_t k = 0;
};

inline Key make_key(uint64_t seed, Stream stream) {
  return {mix(seed + kGolden * (static_cast<uint64_t>(stream) + 1))};
}

// One 64-bit word per (key, a, b, attempt) cell; a is typically the round,
// b the vertex.
inline uint64_t draw(Key key, uint64_t a, uint64_t b, uint64_t attempt = 0) {
  uint64_t x = key.k;
  x = mix(x ^ (a + kGolden));
  x = mix(x ^ (b + kGolden) ^ (attempt * 0xd1342543de82ef95ull));
  return x;
}

// Bernoulli with success probability exactly 2^-level (1 for level <= 0).
// Chained draws keep it exact past 64 bits.
inline bool bernoulli_pow2(Key key, uint64_t a, uint64_t b, int32_t level) {
  if (level <= 0) return true;
  int32_t rem = level;
  uint64_t attempt = 0;
  while (rem > 64) {
    if (draw(key, a, b, attempt++) != 0) return false;
    rem -= 64;
  }
  return draw(key, a, b, attempt) < (1ull << (64 - rem));
}

// Bernoulli with probability p given as a double (graph generation, fault
// target selection). Threshold comparison on one 64-bit word.
inline bool bernoulli(Key key, uint64_t a, uint64_t b, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  const auto threshold = static_cast<uint64_t>(std::ldexp(p, 64));
  return draw(key, a, b) < threshold;
}

// Unbiased integer in [0, bound); rejection retries advance the attempt
// counter, keeping the result deterministic.
inline uint64_t uniform_below(Key key, uint64_t a, uint64_t b, uint64_t bound) {
  const uint64_t rem = (UINT64_MAX % bound) + 1;  // 2^64 mod bound
  const uint64_t cut = (rem == bound) ? UINT64_MAX : UINT64_MAX - rem;
  for (uint64_t attempt = 0;; ++attempt) {
    const uint64_t r = draw(key, a, b, attempt);
    if (r <= cut) return r % bound;
  }
}

}  // namespace beepmis::rng
