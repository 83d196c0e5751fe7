#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/models/wildfire.hpp"

namespace casim::cli {

// Fully validated run description, parsed from the line-oriented
// `key = value` format with [section] headers. Unknown sections, keys and
// model parameters are rejected with the offending line number.
struct RunConfig {
  std::string model;  // sacs | flocksense | wildfire | scholars
  int width = 0;      // 0 = model default
  int height = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = "out";
  bool summarize = false;

  // constants from the model's section; experiment inputs override per run
  std::map<std::string, double> params;
  std::vector<models::WeatherEvent> weather;  // wildfire only
  std::string history_csv;                    // scholars only

  engine::ExperimentSpec experiment;

  std::vector<std::string> invariants;
  int vomas_every = 1;
  int vomas_sample_cap = 64;
};

RunConfig parse_config(const std::string& text);

// Canonical text form; parse(emit(c)) round-trips to an equal config.
std::string emit_config(const RunConfig& c);

// FNV-1a over the canonical emission, excluding observer selection and
// output paths, so a run's identity is the simulation it performs.
std::uint64_t config_hash(const RunConfig& c);

bool operator==(const RunConfig& a, const RunConfig& b);

// Names of the model's accepted parameters (defaults included).
const std::map<std::string, double>& model_parameter_schema(
    const std::string& model);
// World dimensions used when the config leaves them at 0.
std::pair<int, int> model_default_dims(const std::string& model);
// Invariant names a model can register.
std::vector<std::string> model_invariant_names(const std::string& model);

// Env overrides <MODEL>__<SECTION>__<KEY>=value ('-' spelled as '_');
// applied between file parsing and command-line flags.
void apply_env_overrides(RunConfig& c,
                         const std::map<std::string, std::string>& env);

}  // namespace casim::cli
