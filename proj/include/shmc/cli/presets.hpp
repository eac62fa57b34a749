#pragma once

// Canned experiment configs reproducing the study cases the library was
// built around. `shmc run <id>` accepts any of these ids in place of a
// config file.

#include <string>
#include <vector>

#include "json.hpp"

namespace shmc::cli {

struct PresetInfo {
  std::string id;
  std::string summary;
};

const std::vector<PresetInfo>& preset_list();
bool is_preset(const std::string& id);
nlohmann::json preset_config(const std::string& id);  // throws ConfigError on unknown ids

}  // namespace shmc::cli
