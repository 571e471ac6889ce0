#include "muonscale/trace.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "muonscale/errors.hpp"

namespace muonscale {

void Trace::append_row(std::vector<std::optional<double>> row) {
  if (row.size() != columns_.size())
    throw config_error("trace row width mismatch");
  rows_.push_back(std::move(row));
}

std::optional<double> Trace::cell(std::size_t row, std::size_t col) const {
  if (row >= rows_.size() || col >= columns_.size()) return std::nullopt;
  return rows_[row][col];
}

std::optional<double> Trace::stat(const std::string& name) const {
  auto it = stats_.find(name);
  if (it == stats_.end()) return std::nullopt;
  return it->second;
}

std::string Trace::format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Trace::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (row[c]) out += format_number(*row[c]);
    }
    out += '\n';
  }
  return out;
}

void Trace::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot open output file '" + path + "'");
  f << to_csv();
  if (!f) throw config_error("failed writing '" + path + "'");
}

}  // namespace muonscale
