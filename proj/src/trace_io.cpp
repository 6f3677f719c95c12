#include "beepmis/trace_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>

#include "beepmis/diagnostics.hpp"
#include "beepmis/error.hpp"
#include "beepmis/verifier.hpp"

namespace beepmis {

using nlohmann::json;

namespace {

json fault_to_json(const FaultSpec& f) {
  json j;
  j["round"] = f.round;
  j["mode"] = f.mode == FaultMode::SET_LEVEL ? "set" : "random";
  if (f.mode == FaultMode::SET_LEVEL) j["level"] = f.set_level;
  if (f.fraction > 0.0) j["fraction"] = f.fraction;
  if (!f.targets.empty()) j["targets"] = f.targets;
  return j;
}

FaultSpec fault_from_json(const json& j) {
  FaultSpec f;
  f.round = j.at("round").get<int64_t>();
  f.mode = j.at("mode").get<std::string>() == "set" ? FaultMode::SET_LEVEL
                                                    : FaultMode::UNIFORM_RANDOM_LEVEL;
  if (j.contains("level")) f.set_level = j["level"].get<int32_t>();
  if (j.contains("fraction")) f.fraction = j["fraction"].get<double>();
  if (j.contains("targets")) f.targets = j["targets"].get<std::vector<VertexId>>();
  return f;
}

std::vector<uint8_t> bits_from_json(const json& j) {
  std::vector<uint8_t> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(x.get<int>() ? 1 : 0);
  return out;
}

json bits_to_json(const std::vector<uint8_t>& bits) {
  json j = json::array();
  for (uint8_t b : bits) j.push_back(b ? 1 : 0);
  return j;
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const Graph& g, const RunConfig& config,
                       const RunResult& result, const TraceWriteOptions& options) {
  json header;
  header["type"] = "header";
  header["n"] = g.n();
  header["m"] = g.m();
  json edges = json::array();
  for (const auto& [u, v] : g.edge_list()) edges.push_back({u, v});
  header["edges"] = std::move(edges);
  header["variant"] = variant_name(config.protocol.variant);
  header["policy"] = policy_name(config.protocol.policy.kind);
  header["c1"] = config.protocol.policy.c1;
  header["lmax"] = result.final_state.lmax;
  header["init"] = init_mode_name(config.init.mode);
  if (config.init.mode == InitMode::EXPLICIT) header["init_levels"] = config.init.explicit_levels;
  header["seed"] = result.seed;
  header["max_rounds"] = config.max_rounds;
  json faults = json::array();
  for (const FaultSpec& f : config.faults) faults.push_back(fault_to_json(f));
  header["faults"] = std::move(faults);
  header["levels_logged"] = options.log_levels;
  header["events_logged"] = options.log_events;
  out << header.dump() << '\n';

  const bool two = config.protocol.variant == Variant::V2_TWO_CHANNEL;
  const bool diag_available = !result.diagnostics.empty();
  for (size_t i = 0; i < result.trace.rounds.size(); ++i) {
    const RoundTrace& rt = result.trace.rounds[i];
    json rec;
    rec["type"] = "round";
    rec["round"] = rt.events.round_index;
    int64_t b1 = 0, b2 = 0;
    for (uint8_t b : rt.events.beeped_ch1) b1 += b;
    for (uint8_t b : rt.events.beeped_ch2) b2 += b;
    rec["beeps_ch1"] = b1;
    if (two) rec["beeps_ch2"] = b2;
    LevelState s{rt.levels, result.final_state.lmax};
    StableSets ss = stable_sets(g, s, config.protocol.variant);
    rec["mis"] = ss.mis.size();
    rec["stable"] = ss.stable_count;
    if (diag_available && i < result.diagnostics.size()) {
      const DiagCounters& dc = result.diagnostics[i];
      rec["prominent"] = dc.prominent;
      rec["platinum"] = dc.platinum;
      rec["light"] = dc.light;
      rec["golden"] = dc.golden;
      rec["eta_min"] = dc.eta_min;
      rec["eta_max"] = dc.eta_max;
    } else if (!two) {
      // classifier counters are part of the round record for v1 traces
      RoundDiagnostics rd = classify_round(g, s, ss.stable_mask);
      DiagCounts c = summarize(rd);
      rec["prominent"] = c.prominent;
      rec["platinum"] = c.platinum;
      rec["light"] = c.light;
      rec["golden"] = c.golden;
      rec["eta_min"] = c.eta_min.to_double();
      rec["eta_max"] = c.eta_max.to_double();
    }
    if (options.log_levels) rec["levels"] = rt.levels;
    if (options.log_events) {
      rec["beeped_ch1"] = bits_to_json(rt.events.beeped_ch1);
      rec["heard_ch1"] = bits_to_json(rt.events.heard_ch1);
      if (two) {
        rec["beeped_ch2"] = bits_to_json(rt.events.beeped_ch2);
        rec["heard_ch2"] = bits_to_json(rt.events.heard_ch2);
      }
    }
    out << rec.dump() << '\n';
  }

  json res;
  res["type"] = "result";
  res["stabilized"] = result.stabilized;
  res["stabilization_round"] = result.stabilization_round;
  res["rounds_executed"] = result.rounds_executed;
  res["mis_set"] = result.mis_set;
  res["final_levels"] = result.final_state.levels;
  res["fault_rounds"] = result.fault_rounds;
  res["rounds_after_last_fault"] = result.rounds_after_last_fault;
  out << res.dump() << '\n';
}

TraceFile read_trace_jsonl(std::istream& in) {
  TraceFile file;
  std::string line;
  bool saw_header = false, saw_result = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::PARSE, std::string("trace line is not valid JSON: ") + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      saw_header = true;
      const auto n = j.at("n").get<uint32_t>();
      EdgeList edges;
      for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
      file.graph = build_graph(n, edges);
      file.config.protocol.variant = variant_from_name(j.at("variant").get<std::string>());
      file.config.protocol.policy.kind = policy_from_name(j.at("policy").get<std::string>());
      file.config.protocol.policy.c1 = j.at("c1").get<int32_t>();
      file.lmax = j.at("lmax").get<std::vector<int32_t>>();
      if (file.config.protocol.policy.kind == LmaxPolicyKind::EXPLICIT)
        file.config.protocol.policy.explicit_values = file.lmax;
      file.config.protocol.c2_warn = 0.0;  // replays should not re-warn
      file.config.init.mode = init_mode_from_name(j.at("init").get<std::string>());
      if (j.contains("init_levels"))
        file.config.init.explicit_levels = j["init_levels"].get<std::vector<int32_t>>();
      file.config.seed = j.at("seed").get<uint64_t>();
      file.config.max_rounds = j.value("max_rounds", static_cast<int64_t>(0));
      for (const auto& f : j.at("faults")) file.config.faults.push_back(fault_from_json(f));
      file.trace.has_levels = j.value("levels_logged", false);
      file.trace.has_events = j.value("events_logged", false);
    } else if (type == "round") {
      if (!saw_header) fail(ErrorCode::PARSE, "round record before header");
      RoundTrace rt;
      rt.events.round_index = j.at("round").get<int64_t>();
      if (j.contains("levels")) rt.levels = j["levels"].get<std::vector<int32_t>>();
      if (j.contains("beeped_ch1")) {
        rt.events.beeped_ch1 = bits_from_json(j["beeped_ch1"]);
        rt.events.heard_ch1 = bits_from_json(j.at("heard_ch1"));
        if (j.contains("beeped_ch2")) {
          rt.events.beeped_ch2 = bits_from_json(j["beeped_ch2"]);
          rt.events.heard_ch2 = bits_from_json(j.at("heard_ch2"));
        }
      }
      file.trace.rounds.push_back(std::move(rt));
    } else if (type == "result") {
      saw_result = true;
      file.stabilized = j.at("stabilized").get<bool>();
      file.stabilization_round = j.at("stabilization_round").get<int64_t>();
      file.rounds_executed = j.at("rounds_executed").get<int64_t>();
      file.mis_set = j.at("mis_set").get<std::vector<VertexId>>();
      file.final_levels = j.at("final_levels").get<std::vector<int32_t>>();
      file.trace.fault_rounds = j.at("fault_rounds").get<std::vector<int64_t>>();
    } else {
      fail(ErrorCode::PARSE, "unknown trace record type '" + type + "'");
    }
  }
  if (!saw_header) fail(ErrorCode::PARSE, "trace has no header record");
  if (!saw_result) fail(ErrorCode::PARSE, "trace has no result record");
  file.trace.final_levels = file.final_levels;
  return file;
}

VerifyReport verify_trace(const TraceFile& file, bool audit, int max_audits) {
  VerifyReport report;
  const Graph& g = file.graph;
  const Variant variant = file.config.protocol.variant;

  // 1. final-state oracle
  LevelState final_state{file.final_levels, file.lmax};
  StableSets ss = stable_sets(g, final_state, variant);
  if (file.stabilized) {
    if (!ss.all_stable(g.n())) {
      report.failure("recorded final state is not globally stable");
    } else if (ss.mis != file.mis_set) {
      report.failure("recorded mis_set does not match the final state");
    } else {
      MisVerdict verdict = is_valid_mis(g, ss.mis);
      if (verdict.valid)
        report.ok("final state is stable and its MIS verifies");
      else
        report.failure("MIS oracle: " + verdict.reason);
    }
  } else {
    report.ok("run did not claim stabilization");
  }

  // 2. deterministic replay from the recorded seed
  {
    RunOptions opt;
    opt.max_rounds = file.config.max_rounds;
    opt.faults = file.config.faults;
    opt.exec = Exec::Serial;
    opt.keep_trace = file.trace.has_levels || file.trace.has_events;
    RunResult replay = run_until_stable(g, file.config.protocol, file.config.init,
                                        file.config.seed, opt);
    bool match = replay.stabilized == file.stabilized &&
                 replay.stabilization_round == file.stabilization_round &&
                 replay.final_state.levels == file.final_levels && replay.mis_set == file.mis_set;
    if ((file.trace.has_levels || file.trace.has_events) && match) {
      if (replay.trace.rounds.size() != file.trace.rounds.size()) {
        match = false;
      } else {
        for (size_t i = 0; match && i < file.trace.rounds.size(); ++i) {
          const RoundTrace& got = replay.trace.rounds[i];
          const RoundTrace& want = file.trace.rounds[i];
          if (file.trace.has_levels) match = got.levels == want.levels;
          if (file.trace.has_events)
            match = match && got.events.beeped_ch1 == want.events.beeped_ch1 &&
                    got.events.heard_ch1 == want.events.heard_ch1 &&
                    got.events.beeped_ch2 == want.events.beeped_ch2 &&
                    got.events.heard_ch2 == want.events.heard_ch2;
        }
      }
    }
    if (match)
      report.ok("replay from seed " + std::to_string(file.config.seed) + " reproduces the trace");
    else
      report.failure("replay from the recorded seed diverges from the trace");
  }

  int32_t max_lmax = 1;
  for (int32_t x : file.lmax) max_lmax = std::max(max_lmax, x);

  // 3. level/mu monitor over logged V1 levels
  if (variant == Variant::V1_SINGLE_CHANNEL && file.trace.has_levels) {
    auto violations = monitor_level_mu_invariant(g, file.trace, max_lmax);
    if (violations.empty())
      report.ok("level/mu invariant holds over the monitored window");
    else
      report.failure("level/mu invariant violated at round " +
                     std::to_string(violations.front().round) + " vertex " +
                     std::to_string(violations.front().v) + " (" +
                     std::to_string(violations.size()) + " total)");
  }

  // 4. platinum-witness audits on sampled rounds
  if (audit) {
    if (variant != Variant::V2_TWO_CHANNEL) {
      if (!file.trace.has_events || !file.trace.has_levels)
        fail(ErrorCode::TRACE_WINDOW_MISSING, "audit requested but trace lacks levels or events");
      int audited = 0, found = 0;
      const auto last = static_cast<int64_t>(file.trace.rounds.size()) + 1;
      for (int64_t t = max_lmax + 2; t <= last && audited < max_audits; ++t) {
        // fault-corrupted levels carry no solo-beep history; wait out the
        // same burn-in window the monitor uses
        int64_t fault_origin = 1;
        for (int64_t f : file.trace.fault_rounds)
          if (f <= t) fault_origin = std::max(fault_origin, f);
        if (t < fault_origin + max_lmax + 1) continue;
        const auto& lev = file.trace.levels_at(t);
        for (VertexId v = 0; v < g.n() && audited < max_audits; ++v) {
          bool platinum = lev[v] <= 0;
          for (VertexId u : g.neighbors(v)) platinum = platinum || lev[u] <= 0;
          if (!platinum) continue;
          ++audited;
          if (audit_platinum_witness(g, file.lmax, file.trace, v, t).has_value()) ++found;
        }
      }
      if (audited == 0)
        report.ok("no platinum rounds past the burn-in window to audit");
      else if (found == audited)
        report.ok("platinum audit found witnesses for all " + std::to_string(audited) +
                  " sampled rounds");
      else
        report.failure("platinum audit missing witnesses in " + std::to_string(audited - found) +
                       " of " + std::to_string(audited) + " samples");
    } else {
      report.ok("audit skipped: witness windows are unbounded under the two-channel variant");
    }
  }

  return report;
}

}  // namespace beepmis
