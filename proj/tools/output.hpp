#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace mdcq {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// CSV with a fixed header; values at 12 significant digits.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void comment(const std::string& line) { comments_.push_back(line); }
  void add(const std::vector<double>& row);
  std::size_t rows() const { return rows_.size(); }
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<double>> rows_;
};

std::string format_number(double v);

// --out wins over MDC_OUTPUT_DIR, which wins over the working directory.
std::filesystem::path output_dir(const std::string& flag);

// Adds schema_version first and writes with two-space indent.
void write_json(const std::filesystem::path& path, const Json& body);

// Finite doubles stay numbers; NaN and infinities become strings.
Json number(double v);

}  // namespace mdcq
