#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rlve/types.hpp"

namespace rlve {

/// Exit codes: 0 success, 1 usage error, 2 runtime error.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SVG with the effective prompt ratio and each environment's frontier per
/// step, from StepMetrics records.
std::string render_metrics_svg(const std::vector<Json>& metrics);

}  // namespace rlve
