#pragma once

#include <string>
#include <vector>

#include "ddsplit/config.hpp"

namespace ddsplit {

/// Names of the built-in experiment configs, in display order.
[[nodiscard]] std::vector<std::string> demo_names();

/// Built-in config by name. Throws Error{config_error} for unknown names.
[[nodiscard]] ExperimentConfig demo_config(const std::string& name);

}  // namespace ddsplit
