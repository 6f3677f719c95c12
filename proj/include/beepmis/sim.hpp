#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "beepmis/graph.hpp"
#include "beepmis/protocol.hpp"

// Synchronous round execution over a whole graph. Beep decisions are drawn
// from start-of-round state, signals exchanged, updates applied as if
// simultaneous; randomness is keyed per (seed, round, vertex) so the result
// is independent of iteration order and thread count.
namespace beepmis {

struct RngContext {
  uint64_t seed = 0;
  int64_t round = 1;
};

// Who beeped and who heard, per channel. heard is the OR over neighbors;
// full duplex: a beeping vertex still detects neighbors' beeps, never its own.
struct RoundEvents {
  int64_t round_index = 0;
  std::vector<uint8_t> beeped_ch1, heard_ch1;
  std::vector<uint8_t> beeped_ch2, heard_ch2;  // empty under V1
};

enum class Exec { Serial, Parallel };

// One synchronous round, in place. OpenMP-parallel kernel.
void run_round(const Graph& g, LevelState& state, Variant variant, RngContext ctx, RoundEvents& ev);

// Straightforward serial implementation with explicit phase buffers, kept as
// the reference the parallel kernel is tested against. Must agree bit-exactly.
void run_round_reference(const Graph& g, LevelState& state, Variant variant, RngContext ctx,
                         RoundEvents& ev);

inline void run_round(const Graph& g, LevelState& state, Variant variant, RngContext ctx,
                      RoundEvents& ev, Exec exec) {
  if (exec == Exec::Parallel)
    run_round(g, state, variant, ctx, ev);
  else
    run_round_reference(g, state, variant, ctx, ev);
}

enum class FaultMode { UNIFORM_RANDOM_LEVEL, SET_LEVEL };

// Transient fault fired at the start of a round: targeted vertices' levels
// are replaced, everything else untouched. Targets are an explicit list or
// an independent per-vertex coin with probability `fraction`.
struct FaultSpec {
  int64_t round = 1;
  FaultMode mode = FaultMode::UNIFORM_RANDOM_LEVEL;
  int32_t set_level = 0;  // SET_LEVEL only; clamped into the legal range
  double fraction = 0.0;  // in (0,1] selects random targets; 0 uses `targets`
  std::vector<VertexId> targets;
};

LevelState inject_fault(const LevelState& state, Variant variant, const FaultSpec& spec,
                        RngContext ctx);

struct ProtocolConfig {
  Variant variant = Variant::V1_SINGLE_CHANNEL;
  LmaxPolicy policy;
  double c2_warn = 8.0;  // warn if lmax exceeds c2*log2(n); 0 disables
};

struct InitSpec {
  InitMode mode = InitMode::UNIFORM_RANDOM;
  std::vector<int32_t> explicit_levels;
};

// Start-of-round snapshot plus the events of that round.
struct RoundTrace {
  std::vector<int32_t> levels;
  RoundEvents events;
};

struct Trace {
  std::vector<RoundTrace> rounds;      // rounds 1..rounds_executed
  std::vector<int32_t> final_levels;   // state after the last executed round
  std::vector<int64_t> fault_rounds;   // rounds at which a fault actually fired
  bool has_levels = true;
  bool has_events = true;

  // Levels at the start of round t; t = rounds.size()+1 maps to final_levels.
  const std::vector<int32_t>& levels_at(int64_t t) const;
};

struct DiagCounters {
  int64_t round = 0;
  int64_t beeps_ch1 = 0, beeps_ch2 = 0;
  int64_t mis_size = 0, stable_size = 0;
  int64_t prominent = 0, platinum = 0, light = 0, golden = 0;
  double eta_min = 0.0, eta_max = 0.0;
};

struct RunOptions {
  int64_t max_rounds = 0;  // 0 -> default_max_rounds
  std::vector<FaultSpec> faults;
  Exec exec = Exec::Parallel;
  bool keep_trace = false;           // retain per-round levels + events
  bool collect_diagnostics = false;  // per-round classifier counters (V1 only)
};

struct RunResult {
  bool stabilized = false;
  int64_t stabilization_round = 0;  // first round t with S_t = V; 0 if never
  int64_t rounds_executed = 0;
  std::vector<VertexId> mis_set;
  uint64_t seed = 0;
  std::vector<int64_t> fault_rounds;
  int64_t rounds_after_last_fault = 0;
  LevelState final_state;
  Trace trace;                       // populated when keep_trace
  std::vector<DiagCounters> diagnostics;  // populated when collect_diagnostics
};

// Generous multiple of the w.h.p. bound: 200*(log2 n + 1) + 10*max lmax.
int64_t default_max_rounds(uint32_t n, const std::vector<int32_t>& lmax);

// Executes rounds t = 1, 2, ...; at each round start applies due faults,
// then tests the global stability predicate. Deterministic in all arguments.
RunResult run_until_stable(const Graph& g, const ProtocolConfig& config, const InitSpec& init,
                           uint64_t seed, const RunOptions& options = {});

// Validates policy/variant compatibility and explicit-value shapes.
void validate_config(const Graph& g, const ProtocolConfig& config);

}  // namespace beepmis
