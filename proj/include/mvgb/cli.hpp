#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "mvgb/experiments.hpp"

namespace mvgb {

// Command-line entry point (args exclude the program name). Exit codes:
// 0 success, 2 input validation failure, 3 regime error, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shipped default study configurations.
ExperimentConfig default_validate_config();
ExperimentConfig default_correlate_config();
ExperimentConfig default_scale_config();

}  // namespace mvgb
