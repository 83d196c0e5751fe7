#pragma once

#include <filesystem>
#include <string>

#include "casim/cli/config.hpp"
#include "casim/engine/experiment.hpp"

namespace casim::cli {

inline constexpr const char* kVersion = "casim 0.1.0";

struct RunOutputs {
  std::filesystem::path results;
  std::filesystem::path violations;  // empty when no invariants selected
  std::filesystem::path metadata;
  std::filesystem::path summary;  // empty unless summarize
  std::size_t result_rows = 0;
  std::size_t violation_count = 0;
};

// Model factory for a config; combo values override the config's constants.
engine::ModelFactory make_model_factory(const RunConfig& c);

// Observer factory registering the config's invariants (null when none).
engine::ObserverFactory make_observer_factory(
    const RunConfig& c, std::vector<std::vector<vomas::Violation>>* sink);

// Executes the configured experiment and writes results.csv, violations.csv
// (when invariants are selected), metadata.txt and summary.csv (with
// summarize) under out_dir.
RunOutputs run(const RunConfig& c);

// In-memory variant used by tests and the acceptance suite.
engine::ResultTable run_table(const RunConfig& c,
                              std::vector<vomas::Violation>* violations_out =
                                  nullptr);

}  // namespace casim::cli
