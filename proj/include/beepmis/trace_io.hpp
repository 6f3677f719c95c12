#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "beepmis/experiment.hpp"
#include "beepmis/sim.hpp"

// JSON-lines trace format: one header record, one record per executed round,
// one result record. Level vectors and per-vertex events are gated by flags;
// counters and the stable-set sizes are always present.
namespace beepmis {

struct TraceWriteOptions {
  bool log_levels = false;
  bool log_events = false;
};

void write_trace_jsonl(std::ostream& out, const Graph& g, const RunConfig& config,
                       const RunResult& result, const TraceWriteOptions& options);

struct TraceFile {
  Graph graph;
  RunConfig config;
  std::vector<int32_t> lmax;
  Trace trace;
  // claims recorded by the producing run
  bool stabilized = false;
  int64_t stabilization_round = 0;
  int64_t rounds_executed = 0;
  std::vector<VertexId> mis_set;
  std::vector<int32_t> final_levels;
};

TraceFile read_trace_jsonl(std::istream& in);

struct VerifyReport {
  bool pass = true;
  std::vector<std::string> notes;  // findings; failures marked "FAIL:"

  void ok(const std::string& note) { notes.push_back("ok: " + note); }
  void failure(const std::string& note) {
    pass = false;
    notes.push_back("FAIL: " + note);
  }
};

// Re-runs the oracles over a recorded trace: final-state MIS check, replay
// against the recorded seed, the level/mu monitor on V1 level logs, and
// (when requested) platinum-witness audits on sampled rounds.
VerifyReport verify_trace(const TraceFile& file, bool audit, int max_audits = 100);

}  // namespace beepmis
