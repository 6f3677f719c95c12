#include "beepmis/diagnostics.hpp"

#include <algorithm>

#include "beepmis/error.hpp"

namespace beepmis {

Rational compute_mu(const Graph& g, const LevelState& state, VertexId v) {
  if (v >= g.n()) fail(ErrorCode::VERTEX_OUT_OF_RANGE, "vertex " + std::to_string(v));
  Rational mu = Rational::one();  // vacuous minimum for isolated vertices
  bool first = true;
  for (VertexId u : g.neighbors(v)) {
    const Rational r{state.levels[u], state.lmax[u]};
    if (first || r < mu) mu = r;
    first = false;
  }
  return mu;
}

Dyadic compute_eta(const Graph& g, const LevelState& state, const std::vector<uint8_t>& stable_mask,
                   VertexId v) {
  Dyadic eta;
  for (VertexId u : g.neighbors(v))
    if (!stable_mask[u]) eta += Dyadic::pow2(-state.lmax[u]);
  return eta;
}

Dyadic compute_eta_prime(const Graph& g, const LevelState& state,
                         const std::vector<uint8_t>& stable_mask, VertexId v) {
  Dyadic eta;
  for (VertexId u : g.neighbors(v))
    if (!stable_mask[u] && state.lmax[u] > state.lmax[v]) eta += Dyadic::pow2(-state.lmax[v]);
  return eta;
}

RoundDiagnostics classify_round(const Graph& g, const LevelState& state,
                                const std::vector<uint8_t>& stable_mask) {
  const uint32_t n = g.n();
  RoundDiagnostics out;
  out.mu.resize(n);
  out.p.resize(n);
  out.d.resize(n);
  out.d_light.resize(n);
  out.eta.resize(n);
  out.eta_prime.resize(n);
  out.prominent.assign(n, 0);
  out.platinum_for.assign(n, 0);
  out.light.assign(n, 0);
  out.golden_for.assign(n, 0);

  const int64_t nn = n;
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    out.mu[v] = compute_mu(g, state, v);
    out.p[v] = beep_probability_dyadic(state.levels[v], state.lmax[v], Variant::V1_SINGLE_CHANNEL);
    out.prominent[v] = state.levels[v] <= 0;
    out.eta[v] = compute_eta(g, state, stable_mask, v);
    out.eta_prime[v] = compute_eta_prime(g, state, stable_mask, v);
  }

#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    Dyadic d;
    for (VertexId u : g.neighbors(v)) d += out.p[u];
    out.d[v] = d;
    out.light[v] = out.mu[v].cmp_int(0) > 0 &&
                   (out.d[v].cmp_fraction(10, 1) <= 0 || state.levels[v] <= 0);
    uint8_t plat = out.prominent[v];
    for (VertexId u : g.neighbors(v)) {
      if (plat) break;
      plat |= out.prominent[u];
    }
    out.platinum_for[v] = plat;
  }

#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < nn; ++i) {
    const auto v = static_cast<VertexId>(i);
    Dyadic dl;
    for (VertexId u : g.neighbors(v))
      if (out.light[u]) dl += out.p[u];
    out.d_light[v] = dl;
    const bool clause_a = state.levels[v] <= 1 && out.d[v].cmp_fraction(2, 100) <= 0;
    const bool clause_b = out.d_light[v].cmp_fraction(1, 1000) > 0;
    out.golden_for[v] = clause_a || clause_b;
  }
  return out;
}

std::vector<MonitorViolation> monitor_level_mu_invariant(const Graph& g, const Trace& trace,
                                                         int32_t max_lmax) {
  if (!trace.has_levels)
    fail(ErrorCode::TRACE_WINDOW_MISSING, "monitor needs per-round levels in the trace");
  std::vector<MonitorViolation> violations;
  const auto last = static_cast<int64_t>(trace.rounds.size()) + 1;
  for (int64_t t = 1; t <= last; ++t) {
    int64_t fault_origin = 1;
    for (int64_t f : trace.fault_rounds)
      if (f <= t) fault_origin = std::max(fault_origin, f);
    // The state at fault_origin is arbitrary; the invariant is guaranteed
    // once more than max_lmax full rounds have elapsed since then (two
    // adjacent vertices starting at -lmax sit at exactly (0,0) after lmax
    // rounds and need one more to clear).
    if (t < fault_origin + max_lmax + 1) continue;

    const std::vector<int32_t>& levels = trace.levels_at(t);
    for (VertexId v = 0; v < g.n(); ++v) {
      if (levels[v] > 0) continue;
      // level <= 0: mu > 0 requires every neighbor strictly positive
      for (VertexId u : g.neighbors(v)) {
        if (levels[u] <= 0) {
          violations.push_back({t, v});
          break;
        }
      }
    }
  }
  return violations;
}

std::optional<AuditWitness> audit_platinum_witness(const Graph& g,
                                                   const std::vector<int32_t>& lmax,
                                                   const Trace& trace, VertexId v, int64_t t) {
  if (v >= g.n()) fail(ErrorCode::VERTEX_OUT_OF_RANGE, "vertex " + std::to_string(v));
  if (!trace.has_levels || !trace.has_events)
    fail(ErrorCode::TRACE_WINDOW_MISSING, "audit needs levels and events in the trace");
  int32_t max_lmax = 1;
  for (int32_t x : lmax) max_lmax = std::max(max_lmax, x);
  // A vertex that started <= 0 can climb for lmax rounds without ever
  // beeping solo, so the witness is only guaranteed from round max_lmax + 2.
  if (t <= max_lmax + 1)
    fail(ErrorCode::PRECONDITION, "round " + std::to_string(t) + " is inside the burn-in window");
  if (t > static_cast<int64_t>(trace.rounds.size()) + 1)
    fail(ErrorCode::TRACE_WINDOW_MISSING, "round " + std::to_string(t) + " beyond trace");

  const std::vector<int32_t>& levels = trace.levels_at(t);
  std::vector<VertexId> hood{v};
  for (VertexId u : g.neighbors(v)) hood.push_back(u);

  bool platinum = false;
  for (VertexId u : hood) platinum |= levels[u] <= 0;
  if (!platinum)
    fail(ErrorCode::PRECONDITION, "round " + std::to_string(t) + " is not platinum for vertex " +
                                      std::to_string(v));

  // A vertex at level <= 0 climbed from -lmax at +1 per round, so its solo
  // beep lies at most lmax(u)+1 rounds back.
  for (VertexId u : hood) {
    if (levels[u] > 0) continue;
    const int64_t lo = std::max<int64_t>(1, t - lmax[u] - 1);
    const int64_t hi = std::min<int64_t>(t, static_cast<int64_t>(trace.rounds.size()));
    for (int64_t tp = hi; tp >= lo; --tp) {
      const RoundEvents& ev = trace.rounds[tp - 1].events;
      if (ev.beeped_ch1[u] && !ev.heard_ch1[u]) return AuditWitness{u, tp};
    }
  }
  return std::nullopt;
}

DiagCounts summarize(const RoundDiagnostics& d) {
  DiagCounts c;
  const size_t n = d.prominent.size();
  bool first = true;
  for (size_t v = 0; v < n; ++v) {
    c.prominent += d.prominent[v];
    c.platinum += d.platinum_for[v];
    c.light += d.light[v];
    c.golden += d.golden_for[v];
    if (first || d.eta[v] < c.eta_min) c.eta_min = d.eta[v];
    if (first || c.eta_max < d.eta[v]) c.eta_max = d.eta[v];
    first = false;
  }
  return c;
}

}  // namespace beepmis
