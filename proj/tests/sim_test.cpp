#include <doctest.h>

#include <cmath>
#include <numeric>

#include "beepmis/error.hpp"
#include "beepmis/rng.hpp"
#include "beepmis/sim.hpp"
#include "beepmis/verifier.hpp"

using namespace beepmis;

namespace {

ProtocolConfig explicit_config(Variant variant, const std::vector<int32_t>& lmax) {
  ProtocolConfig cfg;
  cfg.variant = variant;
  cfg.policy.kind = LmaxPolicyKind::EXPLICIT;
  cfg.policy.explicit_values = lmax;
  cfg.c2_warn = 0.0;
  return cfg;
}

InitSpec explicit_init(std::vector<int32_t> levels) {
  InitSpec init;
  init.mode = InitMode::EXPLICIT;
  init.explicit_levels = std::move(levels);
  return init;
}

// Expected stabilization round for the isolated vertex started at level s,
// by absorption analysis on the (2*lmax+1)-state chain. An isolated vertex
// never hears, so a beep at level l (probability 2^-l, or 1 at l <= 0) pins
// it at -lmax, which the round-start check then detects; otherwise the level
// decays with floor 1. N_l = expected rounds until the level reads -lmax.
double isolated_expected_stabilization_round(int32_t lmax, int32_t start) {
  REQUIRE(lmax >= 2);  // at lmax = 1 the only positive level is the silent cap
  if (start == -lmax) return 1.0;
  if (start <= 0) return 2.0;  // beeps deterministically, detected next round
  std::vector<double> expected_rounds(lmax + 1, 0.0);
  expected_rounds[1] = 2.0;  // N_1 = 1 + N_1 / 2
  for (int32_t l = 2; l < lmax; ++l)
    expected_rounds[l] = 1.0 + (1.0 - std::ldexp(1.0, -l)) * expected_rounds[l - 1];
  expected_rounds[lmax] = 1.0 + expected_rounds[lmax - 1];  // cap is silent
  return 1.0 + expected_rounds[start];
}

}  // namespace

TEST_CASE("run_round: isolated vertex at level 1 follows the transition table") {
  Graph g = build_graph(1, {});
  bool saw_beep = false, saw_silent = false;
  for (uint64_t seed = 1; seed <= 32; ++seed) {
    LevelState s{{1}, {15}};
    RoundEvents ev;
    run_round(g, s, Variant::V1_SINGLE_CHANNEL, {seed, 1}, ev, Exec::Serial);
    CHECK(!ev.heard_ch1[0]);
    if (ev.beeped_ch1[0]) {
      CHECK(s.levels[0] == -15);
      saw_beep = true;
    } else {
      CHECK(s.levels[0] == 1);
      saw_silent = true;
    }
  }
  CHECK(saw_beep);
  CHECK(saw_silent);
}

TEST_CASE("run_round: adjacent prominent pair increments together") {
  Graph g = build_graph(2, {{0, 1}});
  LevelState s{{-2, -2}, {15, 15}};
  RoundEvents ev;
  run_round(g, s, Variant::V1_SINGLE_CHANNEL, {7, 1}, ev, Exec::Serial);
  // both beep with probability 1, full duplex: both hear
  CHECK(ev.beeped_ch1[0]);
  CHECK(ev.beeped_ch1[1]);
  CHECK(ev.heard_ch1[0]);
  CHECK(ev.heard_ch1[1]);
  CHECK(s.levels == std::vector<int32_t>{-1, -1});
}

TEST_CASE("run_round: stable pair is a fixed point") {
  Graph g = build_graph(2, {{0, 1}});
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    LevelState s{{-15, 15}, {15, 15}};
    RoundEvents ev;
    for (int64_t t = 1; t <= 40; ++t) {
      run_round(g, s, Variant::V1_SINGLE_CHANNEL, {seed, t}, ev, Exec::Serial);
      CHECK(s.levels == std::vector<int32_t>{-15, 15});
    }
  }
}

TEST_CASE("parallel kernel matches serial reference bit for bit") {
  std::vector<GraphFamilySpec> specs = {
      {GraphFamily::GNP, 120, 0.08, 5},
      {GraphFamily::CYCLE, 64},
      {GraphFamily::CLIQUE, 30},
      {GraphFamily::STAR, 50},
  };
  for (const auto& spec : specs) {
    Graph g = generate(spec);
    for (Variant variant : {Variant::V1_SINGLE_CHANNEL, Variant::V2_TWO_CHANNEL}) {
      std::vector<int32_t> lmax(g.n(), 12);
      LevelState a = initial_levels(g, lmax, variant, InitMode::UNIFORM_RANDOM, 99);
      LevelState b = a;
      RoundEvents ea, eb;
      for (int64_t t = 1; t <= 60; ++t) {
        run_round(g, a, variant, {4242, t}, ea, Exec::Parallel);
        run_round_reference(g, b, variant, {4242, t}, eb);
        REQUIRE(a.levels == b.levels);
        REQUIRE(ea.beeped_ch1 == eb.beeped_ch1);
        REQUIRE(ea.heard_ch1 == eb.heard_ch1);
        REQUIRE(ea.beeped_ch2 == eb.beeped_ch2);
        REQUIRE(ea.heard_ch2 == eb.heard_ch2);
      }
    }
  }
}

TEST_CASE("round outcome is independent of vertex iteration order") {
  // test-local round operator that walks vertices in descending order
  auto reverse_round = [](const Graph& g, LevelState& s, RngContext ctx, RoundEvents& ev) {
    const uint32_t n = g.n();
    ev.round_index = ctx.round;
    ev.beeped_ch1.assign(n, 0);
    ev.heard_ch1.assign(n, 0);
    ev.beeped_ch2.clear();
    ev.heard_ch2.clear();
    const rng::Key key = rng::make_key(ctx.seed, rng::Stream::BeepCh1);
    for (VertexId v = n; v-- > 0;)
      if (s.levels[v] < s.lmax[v])
        ev.beeped_ch1[v] =
            rng::bernoulli_pow2(key, static_cast<uint64_t>(ctx.round), v, s.levels[v]);
    for (VertexId v = n; v-- > 0;)
      for (VertexId u : g.neighbors(v))
        if (ev.beeped_ch1[u]) {
          ev.heard_ch1[v] = 1;
          break;
        }
    std::vector<int32_t> next(n);
    for (VertexId v = n; v-- > 0;) {
      VertexRoundInput in;
      in.beeped_ch1 = ev.beeped_ch1[v];
      in.heard_ch1 = ev.heard_ch1[v];
      next[v] = update_level_v1(s.levels[v], s.lmax[v], in);
    }
    s.levels = std::move(next);
  };

  Graph g = generate({GraphFamily::GNP, 70, 0.1, 19});
  std::vector<int32_t> lmax(70, 10);
  LevelState a = initial_levels(g, lmax, Variant::V1_SINGLE_CHANNEL, InitMode::UNIFORM_RANDOM, 8);
  LevelState b = a;
  RoundEvents ea, eb;
  for (int64_t t = 1; t <= 40; ++t) {
    run_round(g, a, Variant::V1_SINGLE_CHANNEL, {321, t}, ea, Exec::Parallel);
    reverse_round(g, b, {321, t}, eb);
    REQUIRE(a.levels == b.levels);
    REQUIRE(ea.beeped_ch1 == eb.beeped_ch1);
    REQUIRE(ea.heard_ch1 == eb.heard_ch1);
  }
}

TEST_CASE("full duplex on K2 with forced prominent levels") {
  Graph g = build_graph(2, {{0, 1}});
  LevelState s{{0, -3}, {10, 10}};
  RoundEvents ev;
  run_round(g, s, Variant::V1_SINGLE_CHANNEL, {1, 1}, ev, Exec::Serial);
  CHECK(ev.beeped_ch1[0]);
  CHECK(ev.beeped_ch1[1]);
  CHECK(ev.heard_ch1[0]);  // hears the neighbor, not itself
  CHECK(ev.heard_ch1[1]);
}

TEST_CASE("inject_fault") {
  Graph g = generate({GraphFamily::CYCLE, 10});
  std::vector<int32_t> lmax(10, 8);
  LevelState s = initial_levels(g, lmax, Variant::V1_SINGLE_CHANNEL, InitMode::ALL_MAX, 0);

  SUBCASE("set level on all vertices") {
    FaultSpec f;
    f.mode = FaultMode::SET_LEVEL;
    f.set_level = 1;
    f.targets.resize(10);
    std::iota(f.targets.begin(), f.targets.end(), 0);
    LevelState out = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {1, 1});
    for (int32_t lev : out.levels) CHECK(lev == 1);
  }

  SUBCASE("set level clamps into the variant range") {
    FaultSpec f;
    f.mode = FaultMode::SET_LEVEL;
    f.set_level = -100;
    f.targets = {3};
    LevelState v1 = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {1, 1});
    CHECK(v1.levels[3] == -8);
    LevelState v2base = initial_levels(g, lmax, Variant::V2_TWO_CHANNEL, InitMode::ALL_MAX, 0);
    LevelState v2 = inject_fault(v2base, Variant::V2_TWO_CHANNEL, f, {1, 1});
    CHECK(v2.levels[3] == 0);
  }

  SUBCASE("empty target list is the identity") {
    FaultSpec f;
    f.mode = FaultMode::UNIFORM_RANDOM_LEVEL;
    LevelState out = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {1, 1});
    CHECK(out.levels == s.levels);
  }

  SUBCASE("random fraction is deterministic and in range") {
    FaultSpec f;
    f.mode = FaultMode::UNIFORM_RANDOM_LEVEL;
    f.fraction = 0.5;
    LevelState a = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {9, 4});
    LevelState b = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {9, 4});
    CHECK(a.levels == b.levels);
    CHECK(a.levels != s.levels);
    for (VertexId v = 0; v < 10; ++v)
      CHECK(level_in_range(a.levels[v], a.lmax[v], Variant::V1_SINGLE_CHANNEL));
    LevelState c = inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {9, 5});
    CHECK(a.levels != c.levels);  // round is part of the key
  }

  SUBCASE("target out of range") {
    FaultSpec f;
    f.targets = {10};
    CHECK_THROWS_WITH_AS(inject_fault(s, Variant::V1_SINGLE_CHANNEL, f, {1, 1}),
                         doctest::Contains("TARGET_OUT_OF_RANGE"), Error);
  }
}

TEST_CASE("isolated vertex stabilizes; stabilization time matches the chain oracle") {
  Graph g = build_graph(1, {});
  ProtocolConfig cfg = explicit_config(Variant::V1_SINGLE_CHANNEL, {15});
  InitSpec init = explicit_init({1});

  const int runs = 4000;
  double sum = 0.0;
  for (int i = 0; i < runs; ++i) {
    RunResult r = run_until_stable(g, cfg, init, 1000 + i, {});
    REQUIRE(r.stabilized);
    CHECK(r.mis_set == std::vector<VertexId>{0});
    CHECK(r.final_state.levels[0] == -15);
    CHECK(r.stabilization_round >= 2);
    sum += static_cast<double>(r.stabilization_round);
  }
  // oracle: E[R] = 3 from level 1 (geometric wait, mean 2, plus detection);
  // sd of R is sqrt(2), so 4 standard errors is a tight but safe band
  const double expected = isolated_expected_stabilization_round(15, 1);
  CHECK(expected == 3.0);
  const double se = std::sqrt(2.0 / runs);
  CHECK(std::abs(sum / runs - expected) < 4 * se);
}

TEST_CASE("isolated vertex from other starts matches the oracle's chain analysis") {
  Graph g = build_graph(1, {});
  ProtocolConfig cfg = explicit_config(Variant::V1_SINGLE_CHANNEL, {6});
  for (int32_t start : {-6, 0, 4, 6}) {
    CAPTURE(start);
    InitSpec init = explicit_init({start});
    const int runs = 4000;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
      RunResult r = run_until_stable(g, cfg, init, 77000 + i, {});
      REQUIRE(r.stabilized);
      sum += static_cast<double>(r.stabilization_round);
    }
    const double expected = isolated_expected_stabilization_round(6, start);
    const double tolerance = start > 0 ? 0.2 : 1e-9;
    CHECK(std::abs(sum / runs - expected) < tolerance + 1e-9);
  }
}

TEST_CASE("K2 stabilizes to one of its two MISes") {
  Graph g = build_graph(2, {{0, 1}});
  ProtocolConfig cfg = explicit_config(Variant::V1_SINGLE_CHANNEL, {8, 8});
  InitSpec init;
  init.mode = InitMode::UNIFORM_RANDOM;
  bool saw0 = false, saw1 = false;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    RunResult r = run_until_stable(g, cfg, init, seed, {});
    REQUIRE(r.stabilized);
    REQUIRE(r.mis_set.size() == 1);
    (r.mis_set[0] == 0 ? saw0 : saw1) = true;
  }
  CHECK(saw0);
  CHECK(saw1);
}

TEST_CASE("stabilized runs are closed: extra rounds leave levels untouched") {
  Graph g = generate({GraphFamily::GNP, 40, 0.1, 21});
  ProtocolConfig cfg;
  cfg.policy = {LmaxPolicyKind::GLOBAL_MAX_DEGREE, 15, {}};
  InitSpec init;
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    RunResult r = run_until_stable(g, cfg, init, seed, {});
    REQUIRE(r.stabilized);
    int32_t lmax_max = 0;
    for (int32_t lm : r.final_state.lmax) lmax_max = std::max(lmax_max, lm);
    CHECK(check_closure(g, cfg, r.final_state, 10 * lmax_max, seed + 555));
  }
}

TEST_CASE("determinism: identical inputs give identical results and traces") {
  Graph g = generate({GraphFamily::GNP, 64, 0.1, 3});
  ProtocolConfig cfg;
  cfg.policy = {LmaxPolicyKind::GLOBAL_MAX_DEGREE, 15, {}};
  InitSpec init;
  RunOptions opt;
  opt.keep_trace = true;
  FaultSpec f;
  f.round = 12;
  f.fraction = 0.25;
  opt.faults.push_back(f);

  RunResult a = run_until_stable(g, cfg, init, 31, opt);
  RunResult b = run_until_stable(g, cfg, init, 31, opt);
  CHECK(a.stabilized == b.stabilized);
  CHECK(a.stabilization_round == b.stabilization_round);
  CHECK(a.rounds_executed == b.rounds_executed);
  CHECK(a.mis_set == b.mis_set);
  CHECK(a.final_state.levels == b.final_state.levels);
  CHECK(a.fault_rounds == b.fault_rounds);
  REQUIRE(a.trace.rounds.size() == b.trace.rounds.size());
  for (size_t i = 0; i < a.trace.rounds.size(); ++i) {
    CHECK(a.trace.rounds[i].levels == b.trace.rounds[i].levels);
    CHECK(a.trace.rounds[i].events.beeped_ch1 == b.trace.rounds[i].events.beeped_ch1);
  }
}

TEST_CASE("stable set grows monotonically in fault-free runs") {
  Graph g = generate({GraphFamily::CYCLE, 32});
  ProtocolConfig cfg;
  cfg.policy = {LmaxPolicyKind::GLOBAL_MAX_DEGREE, 15, {}};
  InitSpec init;
  RunOptions opt;
  opt.keep_trace = true;
  for (uint64_t seed : {5ull, 6ull}) {
    RunResult r = run_until_stable(g, cfg, init, seed, opt);
    REQUIRE(r.stabilized);
    std::vector<uint8_t> prev(g.n(), 0);
    for (int64_t t = 1; t <= static_cast<int64_t>(r.trace.rounds.size()) + 1; ++t) {
      LevelState s{r.trace.levels_at(t), r.final_state.lmax};
      StableSets ss = stable_sets(g, s, cfg.variant);
      for (VertexId v = 0; v < g.n(); ++v) {
        if (prev[v]) CHECK(ss.stable_mask[v]);
      }
      prev = ss.stable_mask;
    }
  }
}

TEST_CASE("faulted run re-stabilizes and reports fault bookkeeping") {
  Graph g = generate({GraphFamily::CYCLE, 32});
  ProtocolConfig cfg;
  cfg.policy = {LmaxPolicyKind::GLOBAL_MAX_DEGREE, 15, {}};
  InitSpec init;
  RunOptions opt;
  opt.keep_trace = true;
  FaultSpec f;
  f.round = 10;
  f.fraction = 0.3;
  f.mode = FaultMode::UNIFORM_RANDOM_LEVEL;
  opt.faults.push_back(f);
  RunResult r = run_until_stable(g, cfg, init, 3, opt);
  REQUIRE(r.stabilized);
  CHECK(r.stabilization_round > 10);  // the run waits for the scheduled fault
  CHECK(r.fault_rounds == std::vector<int64_t>{10});
  CHECK(r.rounds_after_last_fault == r.stabilization_round - 10);
  MisVerdict verdict = is_valid_mis(g, r.mis_set);
  CHECK(verdict.valid);

  // stable sets grow monotonically once the last fault has fired
  std::vector<uint8_t> prev(g.n(), 0);
  bool first = true;
  for (int64_t t = 10; t <= static_cast<int64_t>(r.trace.rounds.size()) + 1; ++t) {
    LevelState s{r.trace.levels_at(t), r.final_state.lmax};
    StableSets ss = stable_sets(g, s, cfg.variant);
    if (!first)
      for (VertexId v = 0; v < g.n(); ++v)
        if (prev[v]) CHECK(ss.stable_mask[v]);
    prev = ss.stable_mask;
    first = false;
  }
}

TEST_CASE("default max rounds formula") {
  std::vector<int32_t> lmax(1024, 25);
  CHECK(default_max_rounds(1024, lmax) == 200 * 11 + 250);
  std::vector<int32_t> one(1, 15);
  CHECK(default_max_rounds(1, one) == 200 + 150);
}

TEST_CASE("config validation") {
  Graph g = generate({GraphFamily::CYCLE, 8});
  ProtocolConfig cfg;
  cfg.variant = Variant::V1_SINGLE_CHANNEL;
  cfg.policy = {LmaxPolicyKind::TWO_HOP_DEGREE, 15, {}};
  CHECK_THROWS_WITH_AS(run_until_stable(g, cfg, {}, 1, {}), doctest::Contains("CONFIG_INVALID"),
                       Error);
  cfg.variant = Variant::V2_TWO_CHANNEL;
  RunResult r = run_until_stable(g, cfg, {}, 1, {});
  CHECK(r.stabilized);
}

TEST_CASE("v2 runs stabilize to verified MISes") {
  for (auto spec : {GraphFamilySpec{GraphFamily::STAR, 32},
                    GraphFamilySpec{GraphFamily::GNP, 48, 0.12, 17}}) {
    Graph g = generate(spec);
    ProtocolConfig cfg;
    cfg.variant = Variant::V2_TWO_CHANNEL;
    cfg.policy = {LmaxPolicyKind::TWO_HOP_DEGREE, 15, {}};
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      RunResult r = run_until_stable(g, cfg, {}, seed, {});
      REQUIRE(r.stabilized);
      CHECK(is_valid_mis(g, r.mis_set).valid);
      int32_t lmax_max = 0;
      for (int32_t lm : r.final_state.lmax) lmax_max = std::max(lmax_max, lm);
      CHECK(check_closure(g, cfg, r.final_state, 2 * lmax_max, seed));
    }
  }
}
