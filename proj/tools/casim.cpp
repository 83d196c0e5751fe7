#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "casim/cli/config.hpp"
#include "casim/cli/presets.hpp"
#include "casim/cli/runner.hpp"

extern char** environ;

namespace {

std::map<std::string, std::string> environment_map() {
  std::map<std::string, std::string> out;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string entry(*e);
    std::size_t eq = entry.find('=');
    if (eq != std::string::npos)
      out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based simulation workbench"};
  app.set_version_flag("--version", casim::cli::kVersion);

  std::string config_path, preset_name, out_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool summarize = false, list_presets = false;

  app.add_option("--config", config_path, "Config file path");
  app.add_option("--preset", preset_name, "Built-in experiment name");
  app.add_option("--seed", seed, "Override the base seed");
  app.add_option("--jobs", jobs, "Concurrent runs");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--summarize", summarize, "Also write mean/CI summary CSV");
  app.add_flag("--list-presets", list_presets, "List built-in experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_presets) {
      for (const auto& name : casim::cli::preset_names())
        std::cout << name << "\n";
      return 0;
    }
    if (config_path.empty() == preset_name.empty()) {
      std::cerr << "error: exactly one of --config or --preset is required\n";
      return 2;
    }
    std::string text;
    if (!preset_name.empty()) {
      text = casim::cli::preset_text(preset_name);
    } else {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open " << config_path << "\n";
        return 2;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }

    casim::cli::RunConfig config = casim::cli::parse_config(text);
    casim::cli::apply_env_overrides(config, environment_map());
    if (app.count("--seed")) {
      config.seed = seed;
      config.experiment.base_seed = seed;
    }
    if (app.count("--jobs")) config.jobs = jobs;
    if (app.count("--out")) config.out_dir = out_dir;
    if (summarize) config.summarize = true;

    const casim::cli::RunOutputs outputs = casim::cli::run(config);
    std::cout << "results: " << outputs.results.string() << " ("
              << outputs.result_rows << " rows)\n";
    if (!outputs.violations.empty())
      std::cout << "violations: " << outputs.violations.string() << " ("
                << outputs.violation_count << " rows)\n";
    if (!outputs.summary.empty())
      std::cout << "summary: " << outputs.summary.string() << "\n";
    std::cout << "metadata: " << outputs.metadata.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
