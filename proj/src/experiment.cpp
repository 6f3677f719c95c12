#include "beepmis/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "beepmis/error.hpp"
#include "beepmis/verifier.hpp"

namespace beepmis {

Graph load_graph(const GraphSource& source) {
  if (source.spec) return generate(*source.spec);
  if (source.path.empty()) fail(ErrorCode::CONFIG_INVALID, "no graph spec or file given");
  return read_edge_list_file(source.path);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t k = values.size();
  if (k % 2 == 1) return values[k / 2];
  return (values[k / 2 - 1] + values[k / 2]) / 2.0;
}

double percentile_of(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, rank == 0 ? 0 : rank - 1)];
}

namespace {

int64_t row_rounds(const RunResult& r) {
  return r.stabilized ? r.stabilization_round - 1 : r.rounds_executed;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  if (config.families.empty() || config.sizes.empty() || config.seeds < 1)
    fail(ErrorCode::CONFIG_INVALID, "sweep matrix must name at least one family, size and seed");

  SweepResult out;
  int64_t run_id = 0;
  for (GraphFamily family : config.families) {
    for (uint32_t n : config.sizes) {
      const auto cell_start = std::chrono::steady_clock::now();
      const bool random_family =
          family == GraphFamily::GNP || family == GraphFamily::RANDOM_TREE;

      GraphFamilySpec base_spec;
      base_spec.family = family;
      base_spec.n = n;
      if (family == GraphFamily::GNP)
        base_spec.p = std::min(1.0, config.gnp_degree / static_cast<double>(n));
      // deterministic families share one graph across all seeds
      Graph shared;
      if (!random_family) shared = generate(base_spec);

      std::vector<RunRow> rows(config.seeds);
      std::vector<std::string> failures(config.seeds);

      const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int64_t i = 0; i < static_cast<int64_t>(config.seeds); ++i) {
        const uint64_t seed = config.base_seed + static_cast<uint64_t>(i);
        GraphFamilySpec spec = base_spec;
        spec.seed = seed;
        const Graph local = random_family ? generate(spec) : Graph();
        const Graph& g = random_family ? local : shared;

        RunOptions opt;
        opt.max_rounds = config.max_rounds;
        opt.faults = config.faults;
        opt.exec = Exec::Serial;  // parallelism lives across runs here
        RunResult r = run_until_stable(g, config.protocol, config.init, seed, opt);

        RunRow& row = rows[i];
        row.seed = seed;
        row.family = family_name(family);
        row.n = n;
        row.m = g.m();
        row.variant = variant_name(config.protocol.variant);
        row.policy = policy_name(config.protocol.policy.kind);
        row.c1 = config.protocol.policy.c1;
        row.rounds = row_rounds(r);
        row.stabilized = r.stabilized;
        row.rounds_after_last_fault = r.rounds_after_last_fault;

        if (r.stabilized) {
          MisVerdict verdict = is_valid_mis(g, r.mis_set);
          if (!verdict.valid) {
            std::ostringstream msg;
            msg << "family=" << family_name(family) << " n=" << n << " seed=" << seed << ": "
                << verdict.reason;
            failures[i] = msg.str();
          }
        }
      }

      SummaryRow sum;
      sum.family = family_name(family);
      sum.n = n;
      sum.variant = variant_name(config.protocol.variant);
      sum.policy = policy_name(config.protocol.policy.kind);
      sum.c1 = config.protocol.policy.c1;
      sum.runs = config.seeds;
      std::vector<double> rounds, ms;
      for (RunRow& row : rows) {
        row.run_id = run_id++;
        sum.stabilized_count += row.stabilized ? 1 : 0;
        rounds.push_back(static_cast<double>(row.rounds));
        ms.push_back(static_cast<double>(row.m));
        out.rows.push_back(row);
      }
      for (const std::string& f : failures)
        if (!f.empty()) out.verification_failures.push_back(f);
      sum.rounds_min = static_cast<int64_t>(*std::min_element(rounds.begin(), rounds.end()));
      sum.rounds_max = static_cast<int64_t>(*std::max_element(rounds.begin(), rounds.end()));
      sum.rounds_median = median_of(rounds);
      sum.rounds_p95 = percentile_of(rounds, 0.95);
      sum.m_median = static_cast<uint64_t>(median_of(ms));
      sum.rounds_per_log2n_median =
          n >= 2 ? sum.rounds_median / std::log2(static_cast<double>(n)) : 0.0;
      sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              cell_start)
                        .count();
      out.summary.push_back(sum);
    }
  }
  return out;
}

void write_per_run_csv(const std::vector<RunRow>& rows, std::ostream& out) {
  out << "run_id,seed,family,n,m,variant,policy,c1,rounds,stabilized,rounds_after_last_fault\n";
  for (const RunRow& r : rows) {
    out << r.run_id << ',' << r.seed << ',' << r.family << ',' << r.n << ',' << r.m << ','
        << r.variant << ',' << r.policy << ',' << r.c1 << ',' << r.rounds << ','
        << (r.stabilized ? 1 : 0) << ',' << r.rounds_after_last_fault << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "family,n,m_median,variant,policy,c1,runs,stabilized_count,rounds_min,rounds_median,"
         "rounds_p95,rounds_max,rounds_per_log2n_median,wall_ms\n";
  char buf[64];
  for (const SummaryRow& r : rows) {
    out << r.family << ',' << r.n << ',' << r.m_median << ',' << r.variant << ',' << r.policy
        << ',' << r.c1 << ',' << r.runs << ',' << r.stabilized_count << ',' << r.rounds_min << ',';
    std::snprintf(buf, sizeof buf, "%.1f,%.1f,", r.rounds_median, r.rounds_p95);
    out << buf << r.rounds_max << ',';
    std::snprintf(buf, sizeof buf, "%.3f,%.1f", r.rounds_per_log2n_median, r.wall_ms);
    out << buf << '\n';
  }
}

FaultSpec parse_fault_spec(const std::string& text) {
  FaultSpec spec;
  bool saw_round = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::PARSE, "fault field '" + item + "' needs key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "round") {
        spec.round = std::stoll(value);
        saw_round = true;
      } else if (key == "frac") {
        spec.fraction = std::stod(value);
      } else if (key == "targets") {
        std::stringstream ts(value);
        std::string v;
        while (std::getline(ts, v, ';'))
          if (!v.empty()) spec.targets.push_back(static_cast<VertexId>(std::stoul(v)));
      } else if (key == "mode") {
        if (value == "random") {
          spec.mode = FaultMode::UNIFORM_RANDOM_LEVEL;
        } else if (value.rfind("set:", 0) == 0) {
          spec.mode = FaultMode::SET_LEVEL;
          spec.set_level = static_cast<int32_t>(std::stol(value.substr(4)));
        } else {
          fail(ErrorCode::PARSE, "fault mode '" + value + "' (want random or set:<level>)");
        }
      } else {
        fail(ErrorCode::PARSE, "unknown fault field '" + key + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::PARSE, "bad fault value in '" + item + "'");
    }
  }
  if (!saw_round) fail(ErrorCode::PARSE, "fault spec needs round=<r>");
  if (spec.fraction > 0.0 && !spec.targets.empty())
    fail(ErrorCode::PARSE, "fault spec: frac and targets are mutually exclusive");
  return spec;
}

}  // namespace beepmis
