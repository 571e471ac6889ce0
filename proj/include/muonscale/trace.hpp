#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace muonscale {

// Column-oriented run record. Cells are doubles; a disengaged cell renders as
// an empty CSV field (used for the gap column when f* is unknown). Numbers
// are formatted with shortest round-trip notation so identical runs produce
// byte-identical files.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  void append_row(std::vector<std::optional<double>> row);
  std::optional<double> cell(std::size_t row, std::size_t col) const;

  // Scalar per-run summaries (final gap, min gradient norm, ...).
  void set_stat(const std::string& name, double value) { stats_[name] = value; }
  std::optional<double> stat(const std::string& name) const;
  const std::map<std::string, double>& stats() const { return stats_; }

  std::string to_csv() const;
  void write_csv(const std::string& path) const;

  static std::string format_number(double v);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::optional<double>>> rows_;
  std::map<std::string, double> stats_;
};

}  // namespace muonscale
