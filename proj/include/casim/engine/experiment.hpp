#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "casim/engine/world.hpp"

namespace casim::engine {

using ParamMap = std::map<std::string, double>;

// One model run: owns its world, advances it a tick at a time, and exposes
// named reporters for the result table.
class ModelInstance {
 public:
  virtual ~ModelInstance() = default;
  virtual World& world() = 0;
  const World& world() const {
    return const_cast<ModelInstance*>(this)->world();
  }
  virtual void step() = 0;
  virtual double report(const std::string& name) = 0;
  // End-of-run experiments may stop before stop_tick once this turns true.
  virtual bool finished() const { return false; }
};

using ModelFactory = std::function<std::unique_ptr<ModelInstance>(
    const ParamMap&, std::uint64_t seed)>;

// Read-only per-run observer (used by the validation layer). Created once
// per run; after_tick fires after every completed tick.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void after_tick(const ModelInstance&) {}
  virtual void on_finish(std::size_t /*run*/, const ModelInstance&) {}
};

using ObserverFactory = std::function<std::unique_ptr<RunObserver>(
    std::size_t run, const ParamMap&, std::uint64_t seed)>;

enum class RecordMode { EveryTick, EndOfRun };

// BehaviorSpace-style sweep: cartesian product of input value lists times
// repetitions, one deterministic seed per run (base_seed + run index).
struct ExperimentSpec {
  std::string name;
  std::vector<std::pair<std::string, std::vector<double>>> inputs;
  int repetitions = 1;
  std::int64_t stop_tick = 0;
  std::vector<std::string> reporters;
  std::uint64_t base_seed = 0;
  RecordMode record = RecordMode::EveryTick;

  void validate() const;
  std::size_t combo_count() const;
  std::size_t total_runs() const { return combo_count() * repetitions; }
  // Combination for a run index; the first listed input varies slowest.
  ParamMap combo_for_run(std::size_t run) const;
  std::uint64_t seed_for_run(std::size_t run) const {
    return base_seed + run;
  }
};

struct ResultCell {
  double value = 0.0;
  bool ok = true;  // false when the reporter failed; serialized as ERR
};

struct ResultRow {
  std::int64_t runnum = 0;  // 1-based
  std::vector<double> params;
  std::int64_t tick = 0;
  std::vector<ResultCell> values;
};

struct ResultTable {
  std::vector<std::string> param_names;
  std::vector<std::string> reporter_names;
  bool tick_column = true;
  std::vector<ResultRow> rows;
};

// Executes every run of the sweep. Runs share no mutable state; with
// jobs > 1 distinct runs execute concurrently, and rows are assembled in
// run order no matter the completion order.
ResultTable run_experiment(const ExperimentSpec& spec,
                           const ModelFactory& factory, int jobs = 1,
                           const ObserverFactory& observers = nullptr);

// Shortest round-trip decimal form (std::to_chars), identical across runs.
std::string format_number(double v);

// header row of column names; one row per (run, recorded tick); UTF-8,
// LF line endings, '.' decimal separator. Lines in comment_header are
// emitted first, prefixed with "# ".
void write_csv(const ResultTable& table, std::ostream& os,
               const std::vector<std::string>& comment_header = {});

}  // namespace casim::engine
