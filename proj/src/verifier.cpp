#include "beepmis/verifier.hpp"

#include <algorithm>

#include "beepmis/error.hpp"

namespace beepmis {

bool stable_prescan(const LevelState& state, Variant variant) {
  const size_t n = state.levels.size();
  for (size_t v = 0; v < n; ++v) {
    const int32_t lev = state.levels[v];
    const int32_t lo = level_floor(variant, state.lmax[v]);
    if (lev != lo && lev != state.lmax[v]) return false;
  }
  return true;
}

StableSets stable_sets(const Graph& g, const LevelState& state, Variant variant) {
  const uint32_t n = g.n();
  StableSets out;
  out.mis_mask.assign(n, 0);
  out.stable_mask.assign(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (state.levels[v] != level_floor(variant, state.lmax[v])) continue;
    bool all_capped = true;
    for (VertexId u : g.neighbors(v)) {
      if (state.levels[u] != state.lmax[u]) {
        all_capped = false;
        break;
      }
    }
    if (all_capped) {
      out.mis_mask[v] = 1;
      out.mis.push_back(v);
    }
  }
  for (VertexId v : out.mis) {
    if (!out.stable_mask[v]) {
      out.stable_mask[v] = 1;
      ++out.stable_count;
    }
    for (VertexId u : g.neighbors(v)) {
      if (!out.stable_mask[u]) {
        out.stable_mask[u] = 1;
        ++out.stable_count;
      }
    }
  }
  return out;
}

MisVerdict is_valid_mis(const Graph& g, const std::vector<VertexId>& candidate) {
  const uint32_t n = g.n();
  std::vector<uint8_t> in_set(n, 0);
  for (VertexId v : candidate) {
    if (v >= n) fail(ErrorCode::VERTEX_OUT_OF_RANGE, "candidate vertex " + std::to_string(v));
    in_set[v] = 1;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!in_set[v]) continue;
    for (VertexId u : g.neighbors(v)) {
      if (in_set[u] && u > v)
        return {false, "independence violated: edge (" + std::to_string(v) + "," +
                           std::to_string(u) + ") inside candidate"};
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (in_set[v]) continue;
    bool covered = false;
    for (VertexId u : g.neighbors(v)) {
      if (in_set[u]) {
        covered = true;
        break;
      }
    }
    if (!covered)
      return {false, "maximality violated: vertex " + std::to_string(v) +
                         " has no candidate neighbor"};
  }
  return {true, ""};
}

bool check_closure(const Graph& g, const ProtocolConfig& config, const LevelState& state,
                   int64_t extra_rounds, uint64_t seed) {
  StableSets ss = stable_sets(g, state, config.variant);
  if (!ss.all_stable(g.n()))
    fail(ErrorCode::NOT_STABLE, "closure check requires a fully stable configuration");
  LevelState sim = state;
  RoundEvents ev;
  for (int64_t t = 1; t <= extra_rounds; ++t) {
    run_round(g, sim, config.variant, {seed, t}, ev, Exec::Serial);
    if (sim.levels != state.levels) return false;
  }
  return true;
}

namespace {

bool connected(uint32_t n, const EdgeList& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<VertexId>> adj(n);
  for (auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<uint8_t> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  uint32_t count = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

}  // namespace

SmallCheckReport exhaustive_smallgraph_check(Variant variant, int32_t lmax_cap, uint32_t n_cap,
                                             uint32_t seeds, uint64_t base_seed,
                                             size_t failure_cap) {
  if (n_cap > 5) fail(ErrorCode::PRECONDITION, "n_cap must be <= 5");
  if (lmax_cap < 1 || lmax_cap > 4) fail(ErrorCode::PRECONDITION, "lmax_cap must be in [1,4]");
  if (seeds < 1) fail(ErrorCode::PRECONDITION, "seeds must be >= 1");

  SmallCheckReport report;
  const int32_t lo = level_floor(variant, lmax_cap);
  const int64_t span = static_cast<int64_t>(lmax_cap) - lo + 1;
  const int64_t round_bound = 50 * static_cast<int64_t>(lmax_cap);

  for (uint32_t n = 1; n <= n_cap; ++n) {
    // all vertex pairs, then every edge subset that yields a connected graph
    EdgeList pairs;
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    const uint32_t num_pairs = static_cast<uint32_t>(pairs.size());

    for (uint64_t mask = 0; mask < (1ull << num_pairs); ++mask) {
      EdgeList edges;
      for (uint32_t i = 0; i < num_pairs; ++i)
        if (mask & (1ull << i)) edges.push_back(pairs[i]);
      if (!connected(n, edges)) continue;
      const Graph g = build_graph(n, edges);
      ++report.graphs;

      int64_t init_count = 1;
      for (uint32_t v = 0; v < n; ++v) init_count *= span;

      ProtocolConfig config;
      config.variant = variant;
      config.policy.kind = LmaxPolicyKind::EXPLICIT;
      config.policy.explicit_values.assign(n, lmax_cap);
      config.c2_warn = 0.0;

      uint64_t pairs_ok = 0, stab_runs = 0, mis_fail = 0;
      std::vector<SmallCheckFailure> local_failures;

#pragma omp parallel for schedule(dynamic) \
    reduction(+ : pairs_ok, stab_runs, mis_fail)
      for (int64_t init_idx = 0; init_idx < init_count; ++init_idx) {
        std::vector<int32_t> init(n);
        int64_t rem = init_idx;
        for (uint32_t v = 0; v < n; ++v) {
          init[v] = lo + static_cast<int32_t>(rem % span);
          rem /= span;
        }
        InitSpec is;
        is.mode = InitMode::EXPLICIT;
        is.explicit_levels = init;

        RunOptions opt;
        opt.max_rounds = round_bound;
        opt.exec = Exec::Serial;

        bool all_stabilized = true;
        for (uint32_t s = 0; s < seeds; ++s) {
          const uint64_t seed = base_seed + s;
          RunResult r = run_until_stable(g, config, is, seed, opt);
          if (!r.stabilized) {
            all_stabilized = false;
            continue;
          }
          ++stab_runs;
          MisVerdict verdict = is_valid_mis(g, r.mis_set);
          if (!verdict.valid) {
            ++mis_fail;
            all_stabilized = false;
#pragma omp critical(smallcheck_failures)
            local_failures.push_back({n, edges, init, seed, verdict.reason});
          }
        }
        if (all_stabilized) ++pairs_ok;
      }

      report.pairs += static_cast<uint64_t>(init_count);
      report.runs += static_cast<uint64_t>(init_count) * seeds;
      report.stabilized_runs += stab_runs;
      report.pairs_fully_stabilized += pairs_ok;
      report.mis_failures += mis_fail;
      for (auto& f : local_failures)
        if (report.failures.size() < failure_cap) report.failures.push_back(std::move(f));
    }
  }

  std::sort(report.failures.begin(), report.failures.end(),
            [](const SmallCheckFailure& a, const SmallCheckFailure& b) {
              return std::tie(a.n, a.edges, a.init, a.seed) < std::tie(b.n, b.edges, b.init, b.seed);
            });
  return report;
}

}  // namespace beepmis
