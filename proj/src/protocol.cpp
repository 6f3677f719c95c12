#include "beepmis/protocol.hpp"

#include "beepmis/rng.hpp"

namespace beepmis {

std::vector<int32_t> assign_lmax(const Graph& g, const LmaxPolicy& policy) {
  const uint32_t n = g.n();
  std::vector<int32_t> lmax(n);
  switch (policy.kind) {
    case LmaxPolicyKind::GLOBAL_MAX_DEGREE: {
      if (policy.c1 < 15) fail(ErrorCode::C1_TOO_SMALL, "GLOBAL_MAX_DEGREE requires c1 >= 15");
      const int32_t value = ceil_log2(std::max(max_degree(g), 1u)) + policy.c1;
      lmax.assign(n, value);
      break;
    }
    case LmaxPolicyKind::LOCAL_DEGREE: {
      if (policy.c1 < 30) fail(ErrorCode::C1_TOO_SMALL, "LOCAL_DEGREE requires c1 >= 30");
      for (VertexId v = 0; v < n; ++v)
        lmax[v] = 2 * ceil_log2(std::max(g.degree(v), 1u)) + policy.c1;
      break;
    }
    case LmaxPolicyKind::TWO_HOP_DEGREE: {
      if (policy.c1 < 15) fail(ErrorCode::C1_TOO_SMALL, "TWO_HOP_DEGREE requires c1 >= 15");
      for (VertexId v = 0; v < n; ++v)
        lmax[v] = 2 * ceil_log2(std::max(two_hop_max_degree(g, v), 1u)) + policy.c1;
      break;
    }
    case LmaxPolicyKind::EXPLICIT: {
      if (policy.explicit_values.size() != n)
        fail(ErrorCode::EXPLICIT_LENGTH_MISMATCH,
             std::to_string(policy.explicit_values.size()) + " values for n=" + std::to_string(n));
      for (int32_t v : policy.explicit_values)
        if (v < 1) fail(ErrorCode::CONFIG_INVALID, "lmax values must be >= 1");
      lmax = policy.explicit_values;
      break;
    }
  }
  return lmax;
}

LevelState initial_levels(const Graph& g, std::vector<int32_t> lmax, Variant variant, InitMode mode,
                          uint64_t seed, const std::vector<int32_t>* explicit_levels) {
  const uint32_t n = g.n();
  if (lmax.size() != n) fail(ErrorCode::EXPLICIT_LENGTH_MISMATCH, "lmax length != n");
  LevelState state;
  state.lmax = std::move(lmax);
  state.levels.resize(n);
  switch (mode) {
    case InitMode::UNIFORM_RANDOM: {
      const rng::Key key = rng::make_key(seed, rng::Stream::InitLevels);
      for (VertexId v = 0; v < n; ++v) {
        const int32_t lo = level_floor(variant, state.lmax[v]);
        const auto span = static_cast<uint64_t>(state.lmax[v] - lo + 1);
        state.levels[v] = lo + static_cast<int32_t>(rng::uniform_below(key, 0, v, span));
      }
      break;
    }
    case InitMode::ALL_MAX:
      for (VertexId v = 0; v < n; ++v) state.levels[v] = state.lmax[v];
      break;
    case InitMode::ALL_MIN:
      for (VertexId v = 0; v < n; ++v) state.levels[v] = level_floor(variant, state.lmax[v]);
      break;
    case InitMode::ALL_ONE:
      state.levels.assign(n, 1);
      break;
    case InitMode::EXPLICIT: {
      if (!explicit_levels || explicit_levels->size() != n)
        fail(ErrorCode::EXPLICIT_LENGTH_MISMATCH, "explicit init levels length != n");
      for (VertexId v = 0; v < n; ++v) {
        if (!level_in_range((*explicit_levels)[v], state.lmax[v], variant))
          fail(ErrorCode::EXPLICIT_OUT_OF_RANGE,
               "level " + std::to_string((*explicit_levels)[v]) + " at vertex " + std::to_string(v));
      }
      state.levels = *explicit_levels;
      break;
    }
  }
  return state;
}

const char* variant_name(Variant v) {
  return v == Variant::V1_SINGLE_CHANNEL ? "v1" : "v2";
}

Variant variant_from_name(const std::string& name) {
  if (name == "v1") return Variant::V1_SINGLE_CHANNEL;
  if (name == "v2") return Variant::V2_TWO_CHANNEL;
  fail(ErrorCode::CONFIG_INVALID, "unknown variant '" + name + "' (want v1|v2)");
}

const char* policy_name(LmaxPolicyKind k) {
  switch (k) {
    case LmaxPolicyKind::GLOBAL_MAX_DEGREE: return "global";
    case LmaxPolicyKind::LOCAL_DEGREE: return "local";
    case LmaxPolicyKind::TWO_HOP_DEGREE: return "twohop";
    case LmaxPolicyKind::EXPLICIT: return "explicit";
  }
  return "?";
}

LmaxPolicyKind policy_from_name(const std::string& name) {
  if (name == "global") return LmaxPolicyKind::GLOBAL_MAX_DEGREE;
  if (name == "local") return LmaxPolicyKind::LOCAL_DEGREE;
  if (name == "twohop") return LmaxPolicyKind::TWO_HOP_DEGREE;
  if (name == "explicit") return LmaxPolicyKind::EXPLICIT;
  fail(ErrorCode::CONFIG_INVALID, "unknown policy '" + name + "' (want global|local|twohop|explicit)");
}

const char* init_mode_name(InitMode m) {
  switch (m) {
    case InitMode::UNIFORM_RANDOM: return "uniform";
    case InitMode::ALL_MAX: return "all-max";
    case InitMode::ALL_MIN: return "all-min";
    case InitMode::ALL_ONE: return "all-one";
    case InitMode::EXPLICIT: return "explicit";
  }
  return "?";
}

InitMode init_mode_from_name(const std::string& name) {
  if (name == "uniform") return InitMode::UNIFORM_RANDOM;
  if (name == "all-max") return InitMode::ALL_MAX;
  if (name == "all-min") return InitMode::ALL_MIN;
  if (name == "all-one") return InitMode::ALL_ONE;
  if (name == "explicit") return InitMode::EXPLICIT;
  fail(ErrorCode::CONFIG_INVALID, "unknown init mode '" + name + "'");
}

}  // namespace beepmis
