#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "run_config.hpp"

namespace allocsim::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Locale-independent shortest-round-trip rendering (std::to_chars), so a
/// given configuration always byte-reproduces its numeric payload.
std::string render_cell(const Cell& cell);

/// Accumulates a rectangular table and writes it as CSV (config echoed in
/// leading `# key=value` comment lines) or as a single JSON document.
class TableWriter {
 public:
  explicit TableWriter(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);

  std::filesystem::path write(const std::filesystem::path& dir,
                              const std::string& stem, const RunConfig& config) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace allocsim::cli
