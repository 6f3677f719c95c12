#include "beepmis/error.hpp"
#include "beepmis/rng.hpp"
#include "beepmis/sim.hpp"

namespace beepmis {

// Serial reference for the round operator. Deliberately plain: explicit
// phase buffers, beeps scattered to neighbors instead of gathered, and a
// separate next-level vector. The OpenMP kernel must match this bit for bit.
void run_round_reference(const Graph& g, LevelState& state, Variant variant, RngContext ctx,
                         RoundEvents& ev) {
  const uint32_t n = g.n();
  if (state.levels.size() != n || state.lmax.size() != n)
    fail(ErrorCode::CONFIG_INVALID, "state size does not match graph");
  const bool two = variant == Variant::V2_TWO_CHANNEL;

  ev.round_index = ctx.round;
  ev.beeped_ch1.assign(n, 0);
  ev.heard_ch1.assign(n, 0);
  ev.beeped_ch2.assign(two ? n : 0, 0);
  ev.heard_ch2.assign(two ? n : 0, 0);

  const rng::Key beep_key = rng::make_key(ctx.seed, rng::Stream::BeepCh1);
  const auto round = static_cast<uint64_t>(ctx.round);

  for (VertexId v = 0; v < n; ++v) {
    const int32_t lev = state.levels[v];
    const int32_t lm = state.lmax[v];
    if (!level_in_range(lev, lm, variant))
      fail(ErrorCode::LEVEL_OUT_OF_RANGE, "vertex " + std::to_string(v));
    if (!two) {
      if (lev < lm) ev.beeped_ch1[v] = rng::bernoulli_pow2(beep_key, round, v, lev);
    } else {
      if (lev > 0 && lev < lm) ev.beeped_ch1[v] = rng::bernoulli_pow2(beep_key, round, v, lev);
      if (lev == 0) ev.beeped_ch2[v] = 1;
    }
  }

  for (VertexId v = 0; v < n; ++v) {
    if (ev.beeped_ch1[v])
      for (VertexId u : g.neighbors(v)) ev.heard_ch1[u] = 1;
    if (two && ev.beeped_ch2[v])
      for (VertexId u : g.neighbors(v)) ev.heard_ch2[u] = 1;
  }

  std::vector<int32_t> next(n);
  for (VertexId v = 0; v < n; ++v) {
    VertexRoundInput in;
    in.beeped_ch1 = ev.beeped_ch1[v];
    in.heard_ch1 = ev.heard_ch1[v];
    if (two) {
      in.beeped_ch2 = ev.beeped_ch2[v];
      in.heard_ch2 = ev.heard_ch2[v];
      next[v] = update_level_v2(state.levels[v], state.lmax[v], in);
    } else {
      next[v] = update_level_v1(state.levels[v], state.lmax[v], in);
    }
  }
  state.levels = std::move(next);
}

}  // namespace beepmis
