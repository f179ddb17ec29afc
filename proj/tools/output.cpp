#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace mdcq {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void Table::add(const std::vector<double>& row) {
  if (row.size() != columns_.size()) throw std::logic_error("Table::add: column count mismatch");
  rows_.push_back(row);
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# schema_version: " << kSchemaVersion << "\n";
  for (const auto& c : comments_) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
    out << "\n";
  }
}

std::filesystem::path output_dir(const std::string& flag) {
  std::filesystem::path dir = ".";
  if (!flag.empty()) dir = flag;
  else if (const char* env = std::getenv("MDC_OUTPUT_DIR"); env && *env) dir = env;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const Json& body) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  for (const auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace mdcq
