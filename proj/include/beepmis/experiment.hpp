#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beepmis/graph.hpp"
#include "beepmis/sim.hpp"

// Monte-Carlo experiment driver shared by the CLI and the acceptance suite.
// Runs dispatch in parallel; aggregation order is fixed by (family, n, seed),
// never by completion order, so repeated sweeps are byte-identical.
namespace beepmis {

struct GraphSource {
  std::optional<GraphFamilySpec> spec;
  std::string path;  // edge-list file when spec is absent
};

Graph load_graph(const GraphSource& source);

// One experiment: a single run plus optional tracing.
struct RunConfig {
  GraphSource graph;
  ProtocolConfig protocol;
  InitSpec init;
  uint64_t seed = 1;
  int64_t max_rounds = 0;
  std::vector<FaultSpec> faults;
};

struct SweepConfig {
  std::vector<GraphFamily> families;
  std::vector<uint32_t> sizes;
  double gnp_degree = 8.0;  // GNP edge probability is gnp_degree / n
  ProtocolConfig protocol;
  InitSpec init;
  uint32_t seeds = 1;
  uint64_t base_seed = 1;
  int64_t max_rounds = 0;
  std::vector<FaultSpec> faults;
  int jobs = 0;  // 0 -> honor OMP defaults / BEEPMIS_JOBS
};

// Fixed per-run CSV contract.
struct RunRow {
  int64_t run_id = 0;
  uint64_t seed = 0;
  std::string family;
  uint32_t n = 0;
  uint64_t m = 0;
  std::string variant, policy;
  int32_t c1 = 0;
  int64_t rounds = 0;  // executed rounds until the stable round start (or max)
  bool stabilized = false;
  int64_t rounds_after_last_fault = 0;
};

struct SummaryRow {
  std::string family;
  uint32_t n = 0;
  uint64_t m_median = 0;
  std::string variant, policy;
  int32_t c1 = 0;
  uint32_t runs = 0;
  uint32_t stabilized_count = 0;
  int64_t rounds_min = 0, rounds_max = 0;
  double rounds_median = 0.0, rounds_p95 = 0.0;
  double rounds_per_log2n_median = 0.0;
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<RunRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<std::string> verification_failures;  // MIS oracle rejections
};

SweepResult run_sweep(const SweepConfig& config);

void write_per_run_csv(const std::vector<RunRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

// "round=30,frac=0.2,mode=random" or "round=5,targets=0;2;7,mode=set:3"
FaultSpec parse_fault_spec(const std::string& text);

double median_of(std::vector<double> values);
double percentile_of(std::vector<double> values, double q);

}  // namespace beepmis
