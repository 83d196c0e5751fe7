#include "casim/engine/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <thread>

namespace casim::engine {

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (stop_tick < 0) throw ConfigError("stop_tick must be >= 0");
  for (const auto& [name, values] : inputs)
    if (values.empty())
      throw ConfigError("input '" + name + "' has no values");
  if (reporters.empty()) throw ConfigError("experiment needs >= 1 reporter");
}

std::size_t ExperimentSpec::combo_count() const {
  std::size_t n = 1;
  for (const auto& [name, values] : inputs) n *= values.size();
  return n;
}

ParamMap ExperimentSpec::combo_for_run(std::size_t run) const {
  std::size_t combo = run / static_cast<std::size_t>(repetitions);
  ParamMap out;
  // first input varies slowest: peel indices off from the last input
  for (std::size_t i = inputs.size(); i-- > 0;) {
    const auto& [name, values] = inputs[i];
    out[name] = values[combo % values.size()];
    combo /= values.size();
  }
  return out;
}

namespace {

struct RunResult {
  std::vector<ResultRow> rows;
};

std::vector<double> params_in_order(const ExperimentSpec& spec,
                                    const ParamMap& params) {
  std::vector<double> out;
  out.reserve(spec.inputs.size());
  for (const auto& [name, values] : spec.inputs) out.push_back(params.at(name));
  return out;
}

ResultRow record_row(const ExperimentSpec& spec, std::size_t run,
                     const std::vector<double>& params, ModelInstance& m) {
  ResultRow row;
  row.runnum = static_cast<std::int64_t>(run) + 1;
  row.params = params;
  row.tick = m.world().tick();
  row.values.reserve(spec.reporters.size());
  for (const auto& name : spec.reporters) {
    ResultCell cell;
    try {
      cell.value = m.report(name);
    } catch (const std::exception&) {
      cell.ok = false;  // reporter failure marks the cell, run continues
    }
    row.values.push_back(cell);
  }
  return row;
}

RunResult execute_run(const ExperimentSpec& spec, const ModelFactory& factory,
                      const ObserverFactory& observers, std::size_t run) {
  const ParamMap params = spec.combo_for_run(run);
  const std::uint64_t seed = spec.seed_for_run(run);
  std::unique_ptr<ModelInstance> model;
  std::unique_ptr<RunObserver> observer;
  try {
    model = factory(params, seed);
    if (observers) observer = observers(run, params, seed);
    const std::vector<double> ordered = params_in_order(spec, params);
    RunResult result;
    if (spec.record == RecordMode::EveryTick)
      result.rows.push_back(record_row(spec, run, ordered, *model));
    for (std::int64_t t = 1; t <= spec.stop_tick; ++t) {
      model->step();
      if (observer) observer->after_tick(*model);
      if (spec.record == RecordMode::EveryTick)
        result.rows.push_back(record_row(spec, run, ordered, *model));
      else if (model->finished())
        break;
    }
    if (spec.record == RecordMode::EndOfRun)
      result.rows.push_back(record_row(spec, run, ordered, *model));
    if (observer) observer->on_finish(run, *model);
    return result;
  } catch (const std::exception& e) {
    throw ModelError("run " + std::to_string(run + 1) + " (seed " +
                     std::to_string(seed) + "): " + e.what());
  }
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec,
                           const ModelFactory& factory, int jobs,
                           const ObserverFactory& observers) {
  spec.validate();
  const std::size_t total = spec.total_runs();

  ResultTable table;
  for (const auto& [name, values] : spec.inputs)
    table.param_names.push_back(name);
  table.reporter_names = spec.reporters;
  table.tick_column = spec.record == RecordMode::EveryTick;

  std::vector<RunResult> per_run(total);
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || total <= 1) {
    for (std::size_t run = 0; run < total; ++run)
      per_run[run] = execute_run(spec, factory, observers, run);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t run = next.fetch_add(1);
        if (run >= total || failed.load()) return;
        try {
          per_run[run] = execute_run(spec, factory, observers, run);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(total));
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw ModelError(first_error);
  }

  std::size_t rows = 0;
  for (const auto& r : per_run) rows += r.rows.size();
  table.rows.reserve(rows);
  for (auto& r : per_run)
    for (auto& row : r.rows) table.rows.push_back(std::move(row));
  return table;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(const ResultTable& table, std::ostream& os,
               const std::vector<std::string>& comment_header) {
  for (const auto& line : comment_header) os << "# " << line << "\n";
  os << "runnum";
  for (const auto& p : table.param_names) os << "," << p;
  if (table.tick_column) os << ",tick";
  for (const auto& r : table.reporter_names) os << "," << r;
  os << "\n";
  for (const auto& row : table.rows) {
    os << row.runnum;
    for (double p : row.params) os << "," << format_number(p);
    if (table.tick_column) os << "," << row.tick;
    for (const auto& cell : row.values) {
      if (cell.ok)
        os << "," << format_number(cell.value);
      else
        os << ",ERR";
    }
    os << "\n";
  }
}

}  // namespace casim::engine
