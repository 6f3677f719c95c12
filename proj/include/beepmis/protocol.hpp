#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "beepmis/dyadic.hpp"
#include "beepmis/error.hpp"
#include "beepmis/graph.hpp"

// Per-vertex state machines of the two protocol variants plus the level-cap
// policies. Everything is a pure function of its arguments and no function
// takes a vertex id: the protocol is anonymous by signature, while the
// simulator owns ids and randomness.
namespace beepmis {

enum class Variant { V1_SINGLE_CHANNEL, V2_TWO_CHANNEL };

enum class LmaxPolicyKind { GLOBAL_MAX_DEGREE, LOCAL_DEGREE, TWO_HOP_DEGREE, EXPLICIT };

struct LmaxPolicy {
  LmaxPolicyKind kind = LmaxPolicyKind::GLOBAL_MAX_DEGREE;
  int32_t c1 = 15;
  std::vector<int32_t> explicit_values;  // EXPLICIT only
};

// The entire mutable protocol state: one integer level per vertex plus the
// per-vertex cap it ranges over.
struct LevelState {
  std::vector<int32_t> levels;
  std::vector<int32_t> lmax;
};

// What one vertex observed in one round. Channel-2 fields stay false under V1.
struct VertexRoundInput {
  bool beeped_ch1 = false;
  bool heard_ch1 = false;
  bool beeped_ch2 = false;
  bool heard_ch2 = false;
};

// Lowest legal level: -lmax under V1, 0 under V2.
inline int32_t level_floor(Variant variant, int32_t lmax) {
  return variant == Variant::V1_SINGLE_CHANNEL ? -lmax : 0;
}

inline bool level_in_range(int32_t level, int32_t lmax, Variant variant) {
  return level >= level_floor(variant, lmax) && level <= lmax;
}

// V1: beep always at level <= 0, never at the cap, else with 2^-level.
// V2 channel 1: only interior levels beep randomly; level 0 emits channel 2
// deterministically and the cap is silent.
inline double beep_probability(int32_t level, int32_t lmax, Variant variant) {
  if (!level_in_range(level, lmax, variant))
    fail(ErrorCode::LEVEL_OUT_OF_RANGE,
         "level " + std::to_string(level) + " with lmax " + std::to_string(lmax));
  if (variant == Variant::V1_SINGLE_CHANNEL) {
    if (level <= 0) return 1.0;
    if (level == lmax) return 0.0;
    return std::ldexp(1.0, -level);
  }
  if (level <= 0 || level >= lmax) return 0.0;
  return std::ldexp(1.0, -level);
}

// Same value as an exact dyadic, for the diagnostics pipeline.
inline Dyadic beep_probability_dyadic(int32_t level, int32_t lmax, Variant variant) {
  if (!level_in_range(level, lmax, variant))
    fail(ErrorCode::LEVEL_OUT_OF_RANGE,
         "level " + std::to_string(level) + " with lmax " + std::to_string(lmax));
  if (variant == Variant::V1_SINGLE_CHANNEL) {
    if (level <= 0) return Dyadic::from_int(1);
    if (level == lmax) return Dyadic();
    return Dyadic::pow2(-level);
  }
  if (level <= 0 || level >= lmax) return Dyadic();
  return Dyadic::pow2(-level);
}

// Single-channel update. Hearing takes precedence; a solo beep drops the
// vertex to -lmax (its claim to the MIS); otherwise the level decays with
// floor 1.
inline int32_t update_level_v1(int32_t level, int32_t lmax, const VertexRoundInput& in) {
  if (level < -lmax || level > lmax)
    fail(ErrorCode::LEVEL_OUT_OF_RANGE,
         "level " + std::to_string(level) + " with lmax " + std::to_string(lmax));
  if (in.heard_ch1) return std::min(level + 1, lmax);
  if (in.beeped_ch1) return -lmax;
  return std::max(level - 1, 1);
}

// Two-channel update. Channel 2 announces membership (level 0) and evicts
// hearers to the cap; precedence is heard-ch2, heard-ch1, own solo beep,
// decay. A member that hears nothing keeps its level.
inline int32_t update_level_v2(int32_t level, int32_t lmax, const VertexRoundInput& in) {
  if (level < 0 || level > lmax)
    fail(ErrorCode::LEVEL_OUT_OF_RANGE,
         "level " + std::to_string(level) + " with lmax " + std::to_string(lmax));
  if (in.beeped_ch2 != (level == 0))
    fail(ErrorCode::CH2_CONSISTENCY, "beeped_ch2 must hold exactly at level 0");
  if (in.heard_ch2) return lmax;
  if (in.heard_ch1) return std::min(level + 1, lmax);
  if (in.beeped_ch1) return 0;
  if (!in.beeped_ch2) return std::max(level - 1, 1);
  return level;
}

// Smallest k with 2^k >= x (x >= 1).
inline int32_t ceil_log2(uint32_t x) {
  int32_t k = 0;
  while ((1ull << k) < x) ++k;
  return k;
}

// Per-vertex level caps from the topology knowledge the policy encodes.
std::vector<int32_t> assign_lmax(const Graph& g, const LmaxPolicy& policy);

enum class InitMode { UNIFORM_RANDOM, ALL_MAX, ALL_MIN, ALL_ONE, EXPLICIT };

// Arbitrary starting configurations; UNIFORM_RANDOM draws independently per
// vertex, deterministically from the seed.
LevelState initial_levels(const Graph& g, std::vector<int32_t> lmax, Variant variant, InitMode mode,
                          uint64_t seed, const std::vector<int32_t>* explicit_levels = nullptr);

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
const char* policy_name(LmaxPolicyKind k);
LmaxPolicyKind policy_from_name(const std::string& name);
const char* init_mode_name(InitMode m);
InitMode init_mode_from_name(const std::string& name);

}  // namespace beepmis
