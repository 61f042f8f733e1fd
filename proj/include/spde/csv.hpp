#pragma once

// CSV output (UTF-8, header row, '.' decimal separator, scientific notation
// with 14 significant digits) and a minimal static SVG line plot derived from
// a table. CSV is the only machine-readable output; plots are never parsed.

#include <string>
#include <variant>
#include <vector>

namespace spde {

using CsvValue = std::variant<double, long, std::string>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(std::vector<CsvValue> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<CsvValue>>& rows() const { return rows_; }
  void write(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<CsvValue>> rows_;
};

std::string format_scientific(double v);

// Line plot of the numeric columns ys against column x (indices into the
// table); writes a standalone SVG.
void write_svg_plot(const CsvTable& table, const std::string& path, const std::string& title,
                    int x_column, const std::vector<int>& y_columns, bool log_log = false);

}  // namespace spde
