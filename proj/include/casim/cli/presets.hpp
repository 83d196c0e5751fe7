#pragma once

#include <string>
#include <vector>

namespace casim::cli {

// Built-in experiment configurations, stored as ordinary config text so
// they go through the same parser as user files.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);  // unknown -> ConfigError

}  // namespace casim::cli
