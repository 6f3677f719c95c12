#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "beepmis/dyadic.hpp"
#include "beepmis/graph.hpp"
#include "beepmis/protocol.hpp"
#include "beepmis/sim.hpp"

// Analytic quantities and round/vertex classifiers over V1 snapshots, in
// exact arithmetic. These observe runs for invariant monitoring and
// empirical study; a hard architectural wall keeps them out of protocol
// decisions.
namespace beepmis {

struct RoundDiagnostics {
  std::vector<Rational> mu;        // min over neighbors of level/lmax
  std::vector<Dyadic> p;           // beep probability
  std::vector<Dyadic> d;           // expected beeping neighbors
  std::vector<Dyadic> d_light;     // expected beeping light neighbors
  std::vector<Dyadic> eta;         // sum of 2^-lmax(u) over unstable neighbors
  std::vector<Dyadic> eta_prime;   // sum of 2^-lmax(v) over unstable higher-cap neighbors
  std::vector<uint8_t> prominent;  // level <= 0
  std::vector<uint8_t> platinum_for;  // some prominent vertex in N+(v)
  std::vector<uint8_t> light;      // mu > 0 and (d <= 10 or level <= 0)
  std::vector<uint8_t> golden_for; // (level <= 1 and d <= 0.02) or d_light > 0.001
};

// mu over an empty neighborhood is 1 (vacuous minimum): an isolated
// prominent vertex is immediately stable.
Rational compute_mu(const Graph& g, const LevelState& state, VertexId v);

Dyadic compute_eta(const Graph& g, const LevelState& state, const std::vector<uint8_t>& stable_mask,
                   VertexId v);
Dyadic compute_eta_prime(const Graph& g, const LevelState& state,
                         const std::vector<uint8_t>& stable_mask, VertexId v);

// Full per-vertex classification of one V1 snapshot.
RoundDiagnostics classify_round(const Graph& g, const LevelState& state,
                                const std::vector<uint8_t>& stable_mask);

struct MonitorViolation {
  int64_t round = 0;
  VertexId v = 0;
};

// Asserts level > 0 or mu > 0 for every vertex in every monitored round of a
// V1 trace. A round t is monitored once t >= f + max lmax, where f is the
// latest fault round at or before t (f = 1 when fault-free). Returns the
// violating (round, vertex) pairs; expected empty.
std::vector<MonitorViolation> monitor_level_mu_invariant(const Graph& g, const Trace& trace,
                                                         int32_t max_lmax);

struct AuditWitness {
  VertexId u = 0;
  int64_t round = 0;  // the solo-beep round
};

// For a platinum round t of v (some vertex of N+(v) at level <= 0, with
// t past the burn-in window), finds a vertex u in N+(v) and a round t' in
// [t - lmax(u) - 1, t] where u beeped and heard nothing. Empty return
// signals a protocol-invariant violation; expected never. V1 traces only.
std::optional<AuditWitness> audit_platinum_witness(const Graph& g,
                                                   const std::vector<int32_t>& lmax,
                                                   const Trace& trace, VertexId v, int64_t t);

struct DiagCounts {
  int64_t prominent = 0, platinum = 0, light = 0, golden = 0;
  Dyadic eta_min, eta_max;
};

DiagCounts summarize(const RoundDiagnostics& d);

}  // namespace beepmis
