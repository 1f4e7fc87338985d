#pragma once

#include <filesystem>
#include <vector>

#include "allocsim/welfare.hpp"
#include "run_config.hpp"

namespace allocsim::cli {

/// Configuration problems that should surface as usage errors (exit 2).
class BadConfig : public Error {
 public:
  using Error::Error;
};

/// Each command validates its configuration, computes, and writes the files
/// listed in its return value.
std::vector<std::filesystem::path> cmd_limits(const RunConfig& config);
std::vector<std::filesystem::path> cmd_figure(const RunConfig& config);
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config);
std::vector<std::filesystem::path> cmd_converge(const RunConfig& config);

/// Scoring rule named on the command line: "borda" or "approval:k".
ScoringRule parse_rule(const std::string& text);

}  // namespace allocsim::cli
