#include "writers.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "allocsim/version.hpp"

namespace allocsim::cli {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_int(std::int64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace

std::string render_cell(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  if (std::holds_alternative<std::int64_t>(cell)) {
    return format_int(std::get<std::int64_t>(cell));
  }
  return std::get<std::string>(cell);
}

TableWriter::TableWriter(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void TableWriter::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error("row width does not match the table header");
  }
  rows_.push_back(std::move(row));
}

std::filesystem::path TableWriter::write(const std::filesystem::path& dir,
                                         const std::string& stem,
                                         const RunConfig& config) const {
  std::filesystem::create_directories(dir);
  const bool json = config.format == OutputFormat::Json;
  std::filesystem::path path = dir / (stem + (json ? ".json" : ".csv"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());

  if (json) {
    nlohmann::json doc;
    doc["version"] = kVersion;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : config.echo()) cfg[key] = value;
    doc["config"] = cfg;
    doc["columns"] = columns_;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json jrow = nlohmann::json::array();
      for (const auto& cell : row) {
        if (std::holds_alternative<double>(cell)) {
          jrow.push_back(std::get<double>(cell));
        } else if (std::holds_alternative<std::int64_t>(cell)) {
          jrow.push_back(std::get<std::int64_t>(cell));
        } else {
          jrow.push_back(std::get<std::string>(cell));
        }
      }
      rows.push_back(std::move(jrow));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
  } else {
    out << "# version=" << kVersion << '\n';
    for (const auto& [key, value] : config.echo()) {
      out << "# " << key << '=' << value << '\n';
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      out << (c ? "," : "") << columns_[c];
    }
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << render_cell(row[c]);
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
  return path;
}

}  // namespace allocsim::cli
