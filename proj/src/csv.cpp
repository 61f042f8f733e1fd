#include "spde/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spde {

std::string format_scientific(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.14e", v);
  return buf;
}

void CsvTable::add_row(std::vector<CsvValue> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("CsvTable: row width does not match header");
  rows_.push_back(std::move(row));
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("CsvTable: cannot open " + path);
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (std::holds_alternative<double>(row[i])) {
        out << format_scientific(std::get<double>(row[i]));
      } else if (std::holds_alternative<long>(row[i])) {
        out << std::get<long>(row[i]);
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << "\n";
  }
}

namespace {

double as_number(const CsvValue& v) {
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<long>(v)) return static_cast<double>(std::get<long>(v));
  return std::nan("");
}

}  // namespace

void write_svg_plot(const CsvTable& table, const std::string& path, const std::string& title,
                    int x_column, const std::vector<int>& y_columns, bool log_log) {
  const int width = 720, height = 480, margin = 60;
  std::vector<double> xs;
  std::vector<std::vector<double>> series(y_columns.size());
  for (const auto& row : table.rows()) {
    double x = as_number(row[x_column]);
    if (log_log) x = std::log10(std::max(x, 1e-300));
    xs.push_back(x);
    for (std::size_t s = 0; s < y_columns.size(); ++s) {
      double y = as_number(row[y_columns[s]]);
      if (log_log) y = std::log10(std::max(y, 1e-300));
      series[s].push_back(y);
    }
  }
  if (xs.empty()) return;
  double xmin = xs[0], xmax = xs[0], ymin = series[0][0], ymax = series[0][0];
  for (double x : xs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  for (const auto& s : series)
    for (double y : s) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << (log_log ? " (log-log)" : "") << "</text>\n";
  out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
      << height - margin << "' stroke='black'/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill='none' stroke='" << colors[s % 5] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << px(xs[i]) << "," << py(series[s][i]) << " ";
    out << "'/>\n";
    out << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * s
        << "' font-size='12' fill='" << colors[s % 5] << "'>"
        << table.columns()[y_columns[s]] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace spde
