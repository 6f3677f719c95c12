#include "beepmis/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "beepmis/diagnostics.hpp"
#include "beepmis/error.hpp"
#include "beepmis/rng.hpp"
#include "beepmis/verifier.hpp"

namespace beepmis {

const std::vector<int32_t>& Trace::levels_at(int64_t t) const {
  if (t >= 1 && t <= static_cast<int64_t>(rounds.size())) return rounds[t - 1].levels;
  if (t == static_cast<int64_t>(rounds.size()) + 1) return final_levels;
  fail(ErrorCode::TRACE_WINDOW_MISSING, "round " + std::to_string(t) + " not in trace");
}

namespace {

void check_state(const Graph& g, const LevelState& state, Variant variant) {
  const uint32_t n = g.n();
  if (state.levels.size() != n || state.lmax.size() != n)
    fail(ErrorCode::CONFIG_INVALID, "state size does not match graph");
  for (VertexId v = 0; v < n; ++v)
    if (!level_in_range(state.levels[v], state.lmax[v], variant))
      fail(ErrorCode::LEVEL_OUT_OF_RANGE, "vertex " + std::to_string(v) + " holds level " +
                                              std::to_string(state.levels[v]));
}

inline void size_events(RoundEvents& ev, uint32_t n, bool two_channel, int64_t round) {
  ev.round_index = round;
  ev.beeped_ch1.assign(n, 0);
  ev.heard_ch1.assign(n, 0);
  if (two_channel) {
    ev.beeped_ch2.assign(n, 0);
    ev.heard_ch2.assign(n, 0);
  } else {
    ev.beeped_ch2.clear();
    ev.heard_ch2.clear();
  }
}

}  // namespace

// Parallel kernel: three data-parallel phases over start-of-round state.
// Phase C touches only a vertex's own level and flags, so the update is
// in place without breaking simultaneity.
void run_round(const Graph& g, LevelState& state, Variant variant, RngContext ctx,
               RoundEvents& ev) {
  check_state(g, state, variant);
  const uint32_t n = g.n();
  const bool two = variant == Variant::V2_TWO_CHANNEL;
  size_events(ev, n, two, ctx.round);
  const rng::Key beep_key = rng::make_key(ctx.seed, rng::Stream::BeepCh1);
  const auto round = static_cast<uint64_t>(ctx.round);

  const int64_t nn = n;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    const int32_t lev = state.levels[v];
    const int32_t lm = state.lmax[v];
    if (!two) {
      ev.beeped_ch1[v] = lev < lm && rng::bernoulli_pow2(beep_key, round, v, lev);
    } else {
      ev.beeped_ch1[v] = lev > 0 && lev < lm && rng::bernoulli_pow2(beep_key, round, v, lev);
      ev.beeped_ch2[v] = lev == 0;
    }
  }

#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    uint8_t h1 = 0, h2 = 0;
    for (VertexId u : g.neighbors(v)) {
      h1 |= ev.beeped_ch1[u];
      if (two) h2 |= ev.beeped_ch2[u];
      if (h1 && (!two || h2)) break;
    }
    ev.heard_ch1[v] = h1;
    if (two) ev.heard_ch2[v] = h2;
  }

#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    VertexRoundInput in;
    in.beeped_ch1 = ev.beeped_ch1[v];
    in.heard_ch1 = ev.heard_ch1[v];
    if (two) {
      in.beeped_ch2 = ev.beeped_ch2[v];
      in.heard_ch2 = ev.heard_ch2[v];
      state.levels[v] = update_level_v2(state.levels[v], state.lmax[v], in);
    } else {
      state.levels[v] = update_level_v1(state.levels[v], state.lmax[v], in);
    }
  }
}

LevelState inject_fault(const LevelState& state, Variant variant, const FaultSpec& spec,
                        RngContext ctx) {
  const auto n = static_cast<uint32_t>(state.levels.size());
  LevelState out = state;
  std::vector<VertexId> targets;
  if (spec.fraction > 0.0) {
    if (spec.fraction > 1.0) fail(ErrorCode::CONFIG_INVALID, "fault fraction must be in (0,1]");
    const rng::Key key = rng::make_key(ctx.seed, rng::Stream::FaultSelect);
    for (VertexId v = 0; v < n; ++v)
      if (rng::bernoulli(key, static_cast<uint64_t>(ctx.round), v, spec.fraction))
        targets.push_back(v);
  } else {
    for (VertexId v : spec.targets) {
      if (v >= n) fail(ErrorCode::TARGET_OUT_OF_RANGE, "fault target " + std::to_string(v));
      targets.push_back(v);
    }
  }
  const rng::Key level_key = rng::make_key(ctx.seed, rng::Stream::FaultLevel);
  for (VertexId v : targets) {
    const int32_t lo = level_floor(variant, out.lmax[v]);
    const int32_t hi = out.lmax[v];
    if (spec.mode == FaultMode::SET_LEVEL) {
      out.levels[v] = std::clamp(spec.set_level, lo, hi);
    } else {
      const auto span = static_cast<uint64_t>(hi - lo + 1);
      out.levels[v] =
          lo + static_cast<int32_t>(rng::uniform_below(level_key, static_cast<uint64_t>(ctx.round), v, span));
    }
  }
  return out;
}

int64_t default_max_rounds(uint32_t n, const std::vector<int32_t>& lmax) {
  const double lg = std::log2(static_cast<double>(std::max(n, 1u)));
  int32_t lmax_max = 1;
  for (int32_t v : lmax) lmax_max = std::max(lmax_max, v);
  return 200 * (static_cast<int64_t>(std::ceil(lg)) + 1) + 10 * static_cast<int64_t>(lmax_max);
}

void validate_config(const Graph& g, const ProtocolConfig& config) {
  if (config.policy.kind == LmaxPolicyKind::TWO_HOP_DEGREE &&
      config.variant != Variant::V2_TWO_CHANNEL)
    fail(ErrorCode::CONFIG_INVALID, "TWO_HOP_DEGREE policy requires the two-channel variant");
  (void)g;
}

RunResult run_until_stable(const Graph& g, const ProtocolConfig& config, const InitSpec& init,
                           uint64_t seed, const RunOptions& options) {
  validate_config(g, config);
  const uint32_t n = g.n();
  const Variant variant = config.variant;
  std::vector<int32_t> lmax = assign_lmax(g, config.policy);

  if (config.c2_warn > 0.0 && n >= 2) {
    const double cap = config.c2_warn * std::log2(static_cast<double>(n));
    for (VertexId v = 0; v < n; ++v)
      if (static_cast<double>(lmax[v]) > cap) {
        std::cerr << "warning: lmax(" << v << ") = " << lmax[v] << " exceeds c2*log2(n) = " << cap
                  << "\n";
        break;
      }
  }

  LevelState state = initial_levels(g, std::move(lmax), variant, init.mode, seed,
                                    init.mode == InitMode::EXPLICIT ? &init.explicit_levels : nullptr);

  const int64_t max_rounds =
      options.max_rounds > 0 ? options.max_rounds : default_max_rounds(n, state.lmax);
  if (max_rounds < 1) fail(ErrorCode::CONFIG_INVALID, "max_rounds must be >= 1");
  for (const FaultSpec& f : options.faults) {
    if (f.round < 1) fail(ErrorCode::CONFIG_INVALID, "fault round must be >= 1");
    if (f.fraction > 0.0 && !f.targets.empty())
      fail(ErrorCode::CONFIG_INVALID, "fault selects targets by fraction or by list, not both");
  }

  RunResult result;
  result.seed = seed;
  result.trace.has_levels = options.keep_trace;
  result.trace.has_events = options.keep_trace;

  // A stable state only ends the run once no scheduled fault remains ahead
  // of it; otherwise the run idles at the fixed point until the fault fires.
  int64_t last_reachable_fault = 0;
  for (const FaultSpec& f : options.faults)
    if (f.round <= max_rounds) last_reachable_fault = std::max(last_reachable_fault, f.round);

  RoundEvents ev;
  for (int64_t t = 1;; ++t) {
    for (const FaultSpec& f : options.faults) {
      if (f.round == t) {
        state = inject_fault(state, variant, f, {seed, t});
        if (result.fault_rounds.empty() || result.fault_rounds.back() != t)
          result.fault_rounds.push_back(t);
      }
    }

    if (t > last_reachable_fault && stable_prescan(state, variant)) {
      StableSets ss = stable_sets(g, state, variant);
      if (ss.all_stable(n)) {
        result.stabilized = true;
        result.stabilization_round = t;
        result.mis_set = std::move(ss.mis);
        break;
      }
    }
    if (t > max_rounds) break;

    if (options.keep_trace || options.collect_diagnostics) {
      if (options.collect_diagnostics && variant == Variant::V1_SINGLE_CHANNEL) {
        StableSets ss = stable_sets(g, state, variant);
        RoundDiagnostics rd = classify_round(g, state, ss.stable_mask);
        DiagCounts c = summarize(rd);
        DiagCounters dc;
        dc.round = t;
        dc.mis_size = static_cast<int64_t>(ss.mis.size());
        dc.stable_size = ss.stable_count;
        dc.prominent = c.prominent;
        dc.platinum = c.platinum;
        dc.light = c.light;
        dc.golden = c.golden;
        dc.eta_min = c.eta_min.to_double();
        dc.eta_max = c.eta_max.to_double();
        result.diagnostics.push_back(dc);
      }
      if (options.keep_trace) result.trace.rounds.push_back({state.levels, {}});
    }

    run_round(g, state, variant, {seed, t}, ev, options.exec);
    ++result.rounds_executed;

    if (options.keep_trace) result.trace.rounds.back().events = ev;
    if (options.collect_diagnostics && variant == Variant::V1_SINGLE_CHANNEL &&
        !result.diagnostics.empty()) {
      auto& dc = result.diagnostics.back();
      for (uint8_t b : ev.beeped_ch1) dc.beeps_ch1 += b;
      for (uint8_t b : ev.beeped_ch2) dc.beeps_ch2 += b;
    }
  }

  result.final_state = std::move(state);
  result.trace.final_levels = result.final_state.levels;
  result.trace.fault_rounds = result.fault_rounds;

  if (!result.fault_rounds.empty() && result.stabilized) {
    int64_t last = 0;
    for (int64_t f : result.fault_rounds)
      if (f <= result.stabilization_round) last = std::max(last, f);
    result.rounds_after_last_fault =
        last > 0 ? result.stabilization_round - last : result.stabilization_round - 1;
  } else if (result.stabilized) {
    result.rounds_after_last_fault = result.stabilization_round - 1;
  } else {
    result.rounds_after_last_fault = result.rounds_executed;
  }
  return result;
}

}  // namespace beepmis
