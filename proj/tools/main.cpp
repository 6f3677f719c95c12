// beepmis: simulate, sweep and verify self-stabilizing MIS protocols in the
// synchronous beeping model.
//
// Subcommands: generate, run, sweep, verify, smallcheck. Options may come
// from an INI/TOML config file (--config); command-line flags override file
// values. Exit codes: 0 success, 1 verification failure, 2 config error.

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "beepmis/error.hpp"
#include "beepmis/experiment.hpp"
#include "beepmis/trace_io.hpp"
#include "beepmis/verifier.hpp"

using namespace beepmis;
using nlohmann::json;

namespace {

struct GraphCliOptions {
  std::string family;
  uint32_t n = 0;
  double p = 0.0;
  uint64_t seed = 0;
  std::string file;
};

void add_graph_options(CLI::App* cmd, GraphCliOptions& opts, bool file_allowed) {
  cmd->add_option("--family", opts.family,
                  "Graph family: path|cycle|clique|star|gnp|random_tree|grid");
  cmd->add_option("--n", opts.n, "Vertex count");
  cmd->add_option("--p", opts.p, "Edge probability (gnp only)");
  cmd->add_option("--graph-seed", opts.seed, "Generator seed (gnp, random_tree)");
  if (file_allowed) cmd->add_option("--graph-file", opts.file, "Edge-list file instead of a family");
}

GraphSource graph_source(const GraphCliOptions& opts) {
  GraphSource src;
  if (!opts.file.empty()) {
    if (!opts.family.empty())
      fail(ErrorCode::CONFIG_INVALID, "give either --graph-file or --family, not both");
    src.path = opts.file;
    return src;
  }
  if (opts.family.empty()) fail(ErrorCode::CONFIG_INVALID, "a graph needs --family or --graph-file");
  if (opts.n == 0) fail(ErrorCode::CONFIG_INVALID, "--n must be at least 1");
  src.spec = GraphFamilySpec{family_from_name(opts.family), opts.n, opts.p, opts.seed};
  return src;
}

struct ProtocolCliOptions {
  std::string variant = "v1";
  std::string policy = "global";
  int32_t c1 = 15;
  double c2 = 8.0;
  std::string init = "uniform";
  std::vector<int32_t> init_levels;
  std::vector<int32_t> lmax_values;
};

void add_protocol_options(CLI::App* cmd, ProtocolCliOptions& opts) {
  cmd->add_option("--variant", opts.variant, "Protocol variant: v1|v2");
  cmd->add_option("--policy", opts.policy, "Level-cap policy: global|local|twohop|explicit");
  cmd->add_option("--c1", opts.c1, "Policy constant c1");
  cmd->add_option("--c2", opts.c2, "Warn when lmax exceeds c2*log2(n); 0 disables");
  cmd->add_option("--init", opts.init, "Initial levels: uniform|all-max|all-min|all-one|explicit");
  cmd->add_option("--init-levels", opts.init_levels, "Explicit initial levels (init=explicit)");
  cmd->add_option("--lmax", opts.lmax_values, "Explicit per-vertex caps (policy=explicit)");
}

ProtocolConfig protocol_config(const ProtocolCliOptions& opts) {
  ProtocolConfig cfg;
  cfg.variant = variant_from_name(opts.variant);
  cfg.policy.kind = policy_from_name(opts.policy);
  cfg.policy.c1 = opts.c1;
  cfg.policy.explicit_values = opts.lmax_values;
  cfg.c2_warn = opts.c2;
  return cfg;
}

InitSpec init_spec(const ProtocolCliOptions& opts) {
  InitSpec init;
  init.mode = init_mode_from_name(opts.init);
  init.explicit_levels = opts.init_levels;
  return init;
}

std::vector<FaultSpec> parse_faults(const std::vector<std::string>& texts) {
  std::vector<FaultSpec> faults;
  for (const std::string& t : texts) faults.push_back(parse_fault_spec(t));
  return faults;
}

int cmd_generate(const GraphCliOptions& gopts, const std::string& out_path) {
  GraphSource src = graph_source(gopts);
  Graph g = load_graph(src);
  if (out_path == "-") {
    write_edge_list(g, std::cout);
  } else {
    write_edge_list_file(g, out_path);
    std::cerr << "wrote n=" << g.n() << " m=" << g.m() << " to " << out_path << "\n";
  }
  return 0;
}

int cmd_run(const RunConfig& config, const std::string& trace_path,
            const TraceWriteOptions& trace_opts, bool diag, bool as_json) {
  Graph g = load_graph(config.graph);
  RunOptions opt;
  opt.max_rounds = config.max_rounds;
  opt.faults = config.faults;
  opt.keep_trace = !trace_path.empty();
  opt.collect_diagnostics = diag;
  RunResult r = run_until_stable(g, config.protocol, config.init, config.seed, opt);

  bool verified = false;
  std::string verdict_reason;
  if (r.stabilized) {
    MisVerdict verdict = is_valid_mis(g, r.mis_set);
    verified = verdict.valid;
    verdict_reason = verdict.reason;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) fail(ErrorCode::IO, "cannot open " + trace_path);
    write_trace_jsonl(out, g, config, r, trace_opts);
  }

  if (as_json) {
    json j;
    j["stabilized"] = r.stabilized;
    j["stabilization_round"] = r.stabilization_round;
    j["rounds_executed"] = r.rounds_executed;
    j["mis_size"] = r.mis_set.size();
    j["mis_set"] = r.mis_set;
    j["seed"] = r.seed;
    j["fault_rounds"] = r.fault_rounds;
    j["rounds_after_last_fault"] = r.rounds_after_last_fault;
    j["mis_verified"] = verified;
    std::cout << j.dump() << "\n";
  } else if (r.stabilized) {
    std::cout << "stabilized at round " << r.stabilization_round << " ("
              << r.rounds_after_last_fault << " rounds after the last disturbance); |MIS| = "
              << r.mis_set.size() << "; oracle " << (verified ? "PASS" : "FAIL " + verdict_reason)
              << "\n";
  } else {
    std::cout << "did not stabilize within " << r.rounds_executed << " rounds\n";
  }
  return r.stabilized && verified ? 0 : 1;
}

int cmd_sweep(const SweepConfig& config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  SweepResult result = run_sweep(config);
  {
    std::ofstream runs(out_dir + "/per_run.csv");
    if (!runs) fail(ErrorCode::IO, "cannot write " + out_dir + "/per_run.csv");
    write_per_run_csv(result.rows, runs);
  }
  {
    std::ofstream summary(out_dir + "/summary.csv");
    if (!summary) fail(ErrorCode::IO, "cannot write " + out_dir + "/summary.csv");
    write_summary_csv(result.summary, summary);
  }
  for (const SummaryRow& s : result.summary)
    std::cout << s.family << " n=" << s.n << ": " << s.stabilized_count << "/" << s.runs
              << " stabilized, median rounds " << s.rounds_median << "\n";
  for (const std::string& f : result.verification_failures)
    std::cerr << "verification failure: " << f << "\n";
  return result.verification_failures.empty() ? 0 : 1;
}

int cmd_verify(const std::string& trace_path, bool audit, int max_audits) {
  std::ifstream in(trace_path);
  if (!in) fail(ErrorCode::IO, "cannot open " + trace_path);
  TraceFile file = read_trace_jsonl(in);
  VerifyReport report = verify_trace(file, audit, max_audits);
  for (const std::string& note : report.notes) std::cout << note << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? 0 : 1;
}

int cmd_smallcheck(const std::string& variant, int32_t lmax_cap, uint32_t n_cap, uint32_t seeds,
                   uint64_t base_seed, const std::string& out_path) {
  SmallCheckReport report =
      exhaustive_smallgraph_check(variant_from_name(variant), lmax_cap, n_cap, seeds, base_seed);
  json j;
  j["graphs"] = report.graphs;
  j["pairs"] = report.pairs;
  j["runs"] = report.runs;
  j["stabilized_runs"] = report.stabilized_runs;
  j["pairs_fully_stabilized"] = report.pairs_fully_stabilized;
  j["mis_failures"] = report.mis_failures;
  json failures = json::array();
  for (const SmallCheckFailure& f : report.failures) {
    json jf;
    jf["n"] = f.n;
    json edges = json::array();
    for (auto& [u, v] : f.edges) edges.push_back({u, v});
    jf["edges"] = std::move(edges);
    jf["init"] = f.init;
    jf["seed"] = f.seed;
    jf["what"] = f.what;
    failures.push_back(std::move(jf));
  }
  j["failures"] = std::move(failures);
  j["ok"] = report.ok();
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) fail(ErrorCode::IO, "cannot write " + out_path);
    out << j.dump(2) << "\n";
    std::cout << "checked " << report.pairs << " (graph, init) pairs over " << report.runs
              << " runs; mis_failures=" << report.mis_failures << "\n";
  }
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-stabilizing MIS in the synchronous beeping model"};
  app.set_config("--config", "", "INI/TOML config file; sections name subcommands");
  app.require_subcommand(1);

  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads for parallel dispatch")->envname("BEEPMIS_JOBS");

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Write a graph as an edge-list file");
  GraphCliOptions gen_graph;
  std::string gen_out;
  add_graph_options(generate_cmd, gen_graph, false);
  generate_cmd->add_option("--seed", gen_graph.seed, "Generator seed (alias of --graph-seed)");
  generate_cmd->add_option("--out", gen_out, "Output path ('-' for stdout)")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "One run: simulate until stable, verify the MIS");
  GraphCliOptions run_graph;
  ProtocolCliOptions run_protocol;
  uint64_t run_seed = 1;
  int64_t run_max_rounds = 0;
  std::vector<std::string> run_faults;
  std::string run_trace;
  bool run_trace_levels = false, run_trace_events = false, run_diag = false, run_json = false;
  add_graph_options(run_cmd, run_graph, true);
  add_protocol_options(run_cmd, run_protocol);
  run_cmd->add_option("--seed", run_seed, "Run seed");
  run_cmd->add_option("--max-rounds", run_max_rounds, "Round budget (0 = default bound)");
  run_cmd->add_option("--fault", run_faults,
                      "Fault spec, repeatable: round=R,frac=F|targets=a;b,mode=random|set:K");
  run_cmd->add_option("--trace", run_trace, "Write a JSON-lines trace to this path");
  run_cmd->add_flag("--trace-levels", run_trace_levels, "Log per-round levels in the trace");
  run_cmd->add_flag("--trace-events", run_trace_events, "Log per-round beep/heard events");
  run_cmd->add_flag("--diag", run_diag, "Collect per-round diagnostics counters (v1)");
  run_cmd->add_flag("--json", run_json, "Print the result as JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo matrix: families x sizes x seeds");
  ProtocolCliOptions sweep_protocol;
  std::vector<std::string> sweep_families;
  std::vector<uint32_t> sweep_sizes;
  double sweep_gnp_degree = 8.0;
  uint32_t sweep_seeds = 1;
  uint64_t sweep_base_seed = 1;
  int64_t sweep_max_rounds = 0;
  std::vector<std::string> sweep_faults;
  std::string sweep_out = "sweep_out";
  sweep_cmd->add_option("--families", sweep_families, "Graph families")->required()->delimiter(',');
  sweep_cmd->add_option("--sizes", sweep_sizes, "Vertex counts")->required()->delimiter(',');
  sweep_cmd->add_option("--gnp-degree", sweep_gnp_degree, "GNP expected degree (p = deg/n)");
  add_protocol_options(sweep_cmd, sweep_protocol);
  sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds per cell");
  sweep_cmd->add_option("--base-seed", sweep_base_seed, "First seed");
  sweep_cmd->add_option("--max-rounds", sweep_max_rounds, "Round budget (0 = default bound)");
  sweep_cmd->add_option("--fault", sweep_faults, "Fault spec, repeatable");
  sweep_cmd->add_option("--out-dir", sweep_out, "Directory for per_run.csv and summary.csv");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Re-run the oracles over a recorded trace");
  std::string verify_path;
  bool verify_audit = false;
  int verify_max_audits = 100;
  verify_cmd->add_option("--trace", verify_path, "Trace file (JSON lines)")->required();
  verify_cmd->add_flag("--audit", verify_audit, "Audit platinum rounds for solo-beep witnesses");
  verify_cmd->add_option("--max-audits", verify_max_audits, "Audit sample cap");

  // smallcheck
  auto* small_cmd =
      app.add_subcommand("smallcheck", "Exhaustive oracle over all small connected graphs");
  std::string small_variant = "v1";
  int32_t small_lmax = 3;
  uint32_t small_n = 4, small_seeds = 100;
  uint64_t small_base_seed = 1;
  std::string small_out;
  small_cmd->add_option("--variant", small_variant, "v1|v2");
  small_cmd->add_option("--lmax-cap", small_lmax, "Uniform cap (<= 4)");
  small_cmd->add_option("--n-cap", small_n, "Largest vertex count (<= 5)");
  small_cmd->add_option("--seeds", small_seeds, "Seeds per (graph, init) pair");
  small_cmd->add_option("--base-seed", small_base_seed, "First seed");
  small_cmd->add_option("--out", small_out, "Write the JSON report here ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen_graph, gen_out);
    if (run_cmd->parsed()) {
      RunConfig config;
      config.graph = graph_source(run_graph);
      config.protocol = protocol_config(run_protocol);
      config.init = init_spec(run_protocol);
      config.seed = run_seed;
      config.max_rounds = run_max_rounds;
      config.faults = parse_faults(run_faults);
      TraceWriteOptions topts{run_trace_levels, run_trace_events};
      return cmd_run(config, run_trace, topts, run_diag, run_json);
    }
    if (sweep_cmd->parsed()) {
      SweepConfig config;
      for (const std::string& f : sweep_families) config.families.push_back(family_from_name(f));
      config.sizes = sweep_sizes;
      config.gnp_degree = sweep_gnp_degree;
      config.protocol = protocol_config(sweep_protocol);
      config.init = init_spec(sweep_protocol);
      config.seeds = sweep_seeds;
      config.base_seed = sweep_base_seed;
      config.max_rounds = sweep_max_rounds;
      config.faults = parse_faults(sweep_faults);
      config.jobs = jobs;
      return cmd_sweep(config, sweep_out);
    }
    if (verify_cmd->parsed()) return cmd_verify(verify_path, verify_audit, verify_max_audits);
    if (small_cmd->parsed())
      return cmd_smallcheck(small_variant, small_lmax, small_n, small_seeds, small_base_seed,
                            small_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::NOT_STABLE:
      case ErrorCode::TRACE_WINDOW_MISSING:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
