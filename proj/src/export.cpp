#include "dlgn/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dlgn {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_csv_matrix(const Matrix& m, const std::string& path) {
  if (!all_finite(m))
    throw std::invalid_argument("write_csv_matrix: non-finite entries");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv_matrix: cannot open " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv_matrix: write failed for " + path);
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv_matrix: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("read_csv_matrix: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_csv_matrix: empty file " + path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv_table: cannot open " + path);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j > 0) out << ',';
    out << header[j];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv_table: row width mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv_table: write failed for " + path);
}

void write_pgm_heatmap(const Matrix& m, const std::string& path,
                       HeatmapMeta meta) {
  if (!all_finite(m))
    throw std::invalid_argument("write_pgm_heatmap: non-finite entries");
  const double lo = m.minCoeff();
  const double hi = m.maxCoeff();
  meta.min = lo;
  meta.max = hi;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm_heatmap: cannot open " + path);
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  const double span = hi - lo;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double scaled = span > 0.0 ? (m(i, j) - lo) / span : 0.0;
      const auto pixel =
          static_cast<unsigned char>(std::lround(255.0 * scaled));
      out.write(reinterpret_cast<const char*>(&pixel), 1);
    }
  if (!out) throw std::runtime_error("write_pgm_heatmap: write failed for " + path);

  std::ofstream side(path + ".meta");
  if (!side) throw std::runtime_error("write_pgm_heatmap: cannot open sidecar");
  side << "min = " << format_double(meta.min) << '\n';
  side << "max = " << format_double(meta.max) << '\n';
  side << "normalization = " << meta.normalization << '\n';
  for (const auto& [key, value] : meta.extra)
    side << key << " = " << value << '\n';
}

}  // namespace dlgn
