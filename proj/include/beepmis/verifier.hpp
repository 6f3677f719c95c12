#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beepmis/graph.hpp"
#include "beepmis/protocol.hpp"
#include "beepmis/sim.hpp"

// Ground-truth oracles. These judge protocol output against the graph alone,
// never against protocol history, and nothing here feeds back into protocol
// decisions.
namespace beepmis {

struct StableSets {
  std::vector<VertexId> mis;          // vertices locked into the MIS
  std::vector<uint8_t> mis_mask;      // n bytes
  std::vector<uint8_t> stable_mask;   // mis plus its neighbors
  uint32_t stable_count = 0;

  bool all_stable(uint32_t n) const { return stable_count == n; }
};

// V1: mis = vertices at -lmax whose every neighbor sits at its own cap.
// V2: mis = vertices at 0 whose every neighbor sits at its own cap.
StableSets stable_sets(const Graph& g, const LevelState& state, Variant variant);

// Cheap necessary condition for S = V: every level at a range endpoint.
bool stable_prescan(const LevelState& state, Variant variant);

struct MisVerdict {
  bool valid = true;
  std::string reason;  // violated clause plus a witness when invalid
};

// True iff candidate has no internal edge and every outside vertex has a
// neighbor inside.
MisVerdict is_valid_mis(const Graph& g, const std::vector<VertexId>& candidate);

// Simulates extra_rounds from a fully stable configuration and reports
// whether the level vector survived every round unchanged.
bool check_closure(const Graph& g, const ProtocolConfig& config, const LevelState& state,
                   int64_t extra_rounds, uint64_t seed);

struct SmallCheckFailure {
  uint32_t n = 0;
  EdgeList edges;
  std::vector<int32_t> init;
  uint64_t seed = 0;
  std::string what;
};

struct SmallCheckReport {
  uint64_t graphs = 0;
  uint64_t pairs = 0;  // (graph, initial level vector) pairs
  uint64_t runs = 0;
  uint64_t stabilized_runs = 0;
  uint64_t pairs_fully_stabilized = 0;  // pairs where every seed stabilized
  uint64_t mis_failures = 0;
  std::vector<SmallCheckFailure> failures;  // capped at failure_cap

  bool ok(double min_pair_rate = 0.99) const {
    return mis_failures == 0 &&
           static_cast<double>(pairs_fully_stabilized) >= min_pair_rate * static_cast<double>(pairs);
  }
};

// Every connected graph with n <= n_cap (labeled, by edge-subset
// enumeration), every initial level vector under a uniform cap of lmax_cap,
// `seeds` runs each, round bound 50*lmax_cap. Stabilized outcomes must pass
// the MIS oracle.
SmallCheckReport exhaustive_smallgraph_check(Variant variant, int32_t lmax_cap, uint32_t n_cap,
                                             uint32_t seeds = 100, uint64_t base_seed = 1,
                                             size_t failure_cap = 32);

}  // namespace beepmis
