#include "casim/cli/runner.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "casim/models/flocksense.hpp"
#include "casim/models/sacs.hpp"
#include "casim/models/scholars.hpp"
#include "casim/models/wildfire.hpp"
#include "casim/vomas/vomas.hpp"

namespace casim::cli {

namespace fs = std::filesystem;

engine::ModelFactory make_model_factory(const RunConfig& c) {
  const RunConfig cfg = c;  // owned copy for the closures
  return [cfg](const engine::ParamMap& combo, std::uint64_t seed) {
    engine::ParamMap merged = cfg.params;
    for (const auto& [k, v] : combo) merged[k] = v;
    if (cfg.model == "sacs")
      return models::make_sacs(merged, cfg.width, cfg.height, seed);
    if (cfg.model == "flocksense")
      return models::make_flocksense(merged, cfg.width, cfg.height, seed);
    if (cfg.model == "wildfire")
      return models::make_wildfire(merged, cfg.width, cfg.height, seed,
                                   cfg.weather);
    if (cfg.model == "scholars")
      return models::make_scholars(merged, cfg.width, cfg.height, seed);
    throw ConfigError("unknown model: " + cfg.model);
  };
}

namespace {

vomas::Invariant build_invariant(const RunConfig& c, const std::string& name,
                                 const engine::ParamMap& merged) {
  vomas::Invariant inv;
  if (name == "sensed-bound") {
    inv = models::sensed_bound_invariant();
  } else if (name == "success-location") {
    inv = models::success_location_invariant();
  } else if (name == "fire-danger") {
    inv = models::fire_danger_invariant(
        models::fire_params_from(merged, c.weather), c.vomas_sample_cap);
  } else if (name == "h-consistency") {
    inv = models::h_consistency_invariant();
  } else {
    throw ConfigError("unknown invariant: " + name);
  }
  inv.every_ticks = c.vomas_every;
  if (inv.sample_cap == 0) inv.sample_cap = c.vomas_sample_cap;
  return inv;
}

class ConfigObserver : public engine::RunObserver {
 public:
  ConfigObserver(const RunConfig& c, const engine::ParamMap& merged,
                 std::uint64_t seed,
                 std::vector<std::vector<vomas::Violation>>* sink)
      : harness_(seed), sink_(sink) {
    for (const auto& name : c.invariants)
      harness_.register_invariant(build_invariant(c, name, merged));
  }
  void after_tick(const engine::ModelInstance& m) override {
    harness_.evaluate(m.world());
  }
  void on_finish(std::size_t run, const engine::ModelInstance&) override {
    if (sink_ && run < sink_->size())
      (*sink_)[run] = harness_.violations();
  }

 private:
  vomas::Harness harness_;
  std::vector<std::vector<vomas::Violation>>* sink_;
};

}  // namespace

engine::ObserverFactory make_observer_factory(
    const RunConfig& c, std::vector<std::vector<vomas::Violation>>* sink) {
  if (c.invariants.empty()) return nullptr;
  const RunConfig cfg = c;
  return [cfg, sink](std::size_t run, const engine::ParamMap& combo,
                     std::uint64_t seed) {
    engine::ParamMap merged = cfg.params;
    for (const auto& [k, v] : combo) merged[k] = v;
    return std::make_unique<ConfigObserver>(cfg, merged, seed, sink);
  };
}

engine::ResultTable run_table(const RunConfig& c,
                              std::vector<vomas::Violation>* violations_out) {
  std::vector<std::vector<vomas::Violation>> per_run(
      c.experiment.total_runs());
  engine::ObserverFactory observers =
      make_observer_factory(c, violations_out ? &per_run : nullptr);
  engine::ResultTable table = engine::run_experiment(
      c.experiment, make_model_factory(c), c.jobs, observers);
  if (violations_out) {
    for (auto& v : per_run)
      violations_out->insert(violations_out->end(), v.begin(), v.end());
  }
  return table;
}

namespace {

std::vector<std::string> header_comments(const RunConfig& c) {
  std::ostringstream hash;
  hash << std::hex << config_hash(c);
  return {std::string(kVersion), "config-hash=" + hash.str(),
          "seed=" + std::to_string(c.seed)};
}

void write_summary(const engine::ResultTable& table, std::ostream& os) {
  // mean and 95% CI half-width per reporter, grouped by (params..., tick)
  struct Acc {
    std::vector<double> sum, sumsq;
    std::size_t n = 0;
  };
  std::map<std::pair<std::vector<double>, std::int64_t>, Acc> groups;
  for (const auto& row : table.rows) {
    auto& acc = groups[{row.params, table.tick_column ? row.tick : 0}];
    if (acc.sum.empty()) {
      acc.sum.assign(row.values.size(), 0.0);
      acc.sumsq.assign(row.values.size(), 0.0);
    }
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (!row.values[i].ok) continue;
      acc.sum[i] += row.values[i].value;
      acc.sumsq[i] += row.values[i].value * row.values[i].value;
    }
    acc.n += 1;
  }
  for (const auto& p : table.param_names) os << p << ",";
  if (table.tick_column) os << "tick,";
  os << "n";
  for (const auto& r : table.reporter_names)
    os << "," << r << "_mean," << r << "_ci95";
  os << "\n";
  for (const auto& [key, acc] : groups) {
    for (double p : key.first) os << engine::format_number(p) << ",";
    if (table.tick_column) os << key.second << ",";
    os << acc.n;
    for (std::size_t i = 0; i < acc.sum.size(); ++i) {
      const double n = static_cast<double>(acc.n);
      const double mean = acc.sum[i] / n;
      double ci = 0.0;
      if (acc.n > 1) {
        const double var =
            std::max(0.0, (acc.sumsq[i] - n * mean * mean) / (n - 1.0));
        ci = 1.96 * std::sqrt(var / n);
      }
      os << "," << engine::format_number(mean) << ","
         << engine::format_number(ci);
    }
    os << "\n";
  }
}

RunOutputs run_history_mode(const RunConfig& c) {
  std::ifstream in(c.history_csv);
  if (!in)
    throw ConfigError("cannot open history file: " + c.history_csv);
  const std::vector<models::YearRecord> records =
      models::parse_history_csv(in);
  const auto timeline = models::load_history(records);

  RunOutputs out;
  fs::create_directories(c.out_dir);
  out.results = fs::path(c.out_dir) / "timeline.csv";
  {
    std::ofstream os(out.results, std::ios::binary);
    for (const auto& line : header_comments(c)) os << "# " << line << "\n";
    os << "year,h\n";
    for (const auto& [year, h] : timeline) os << year << "," << h << "\n";
    out.result_rows = timeline.size();
  }
  // TCN of the final snapshot
  if (!records.empty()) {
    models::TcnInput input;
    input.researchers.push_back(
        {"res-0", timeline.empty() ? 0 : timeline.back().second});
    for (const auto& [paper, cites] : records.back().papers)
      input.incidences.push_back({0, paper, cites});
    const models::Tcn tcn =
        models::build_tcn(input, static_cast<double>(c.height));
    std::ofstream edges(fs::path(c.out_dir) / "tcn_edges.tsv",
                        std::ios::binary);
    for (const auto& line : header_comments(c)) edges << "# " << line << "\n";
    net::write_edge_list(tcn.graph, edges);
    std::ofstream nodes(fs::path(c.out_dir) / "tcn_nodes.csv",
                        std::ios::binary);
    for (const auto& line : header_comments(c)) nodes << "# " << line << "\n";
    models::write_tcn_nodes_csv(tcn, nodes);
  }
  out.metadata = fs::path(c.out_dir) / "metadata.txt";
  std::ofstream meta(out.metadata, std::ios::binary);
  for (const auto& line : header_comments(c)) meta << "# " << line << "\n";
  meta << emit_config(c);
  return out;
}

}  // namespace

RunOutputs run(const RunConfig& c) {
  if (c.model == "scholars" && !c.history_csv.empty())
    return run_history_mode(c);

  std::vector<std::vector<vomas::Violation>> per_run(
      c.experiment.total_runs());
  engine::ObserverFactory observers = make_observer_factory(c, &per_run);
  engine::ResultTable table = engine::run_experiment(
      c.experiment, make_model_factory(c), c.jobs, observers);

  RunOutputs out;
  fs::create_directories(c.out_dir);
  out.results = fs::path(c.out_dir) / "results.csv";
  {
    std::ofstream os(out.results, std::ios::binary);
    engine::write_csv(table, os, header_comments(c));
  }
  out.result_rows = table.rows.size();

  if (!c.invariants.empty()) {
    out.violations = fs::path(c.out_dir) / "violations.csv";
    std::vector<vomas::Violation> all;
    for (auto& v : per_run) all.insert(all.end(), v.begin(), v.end());
    std::ofstream os(out.violations, std::ios::binary);
    vomas::write_violations_csv(all, os, header_comments(c));
    out.violation_count = all.size();
  }

  out.metadata = fs::path(c.out_dir) / "metadata.txt";
  {
    std::ofstream meta(out.metadata, std::ios::binary);
    for (const auto& line : header_comments(c)) meta << "# " << line << "\n";
    meta << emit_config(c);
  }

  if (c.summarize) {
    out.summary = fs::path(c.out_dir) / "summary.csv";
    std::ofstream os(out.summary, std::ios::binary);
    for (const auto& line : header_comments(c)) os << "# " << line << "\n";
    write_summary(table, os);
  }
  return out;
}

}  // namespace casim::cli
