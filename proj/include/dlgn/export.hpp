#pragma once

#include <string>
#include <vector>

#include "dlgn/types.hpp"

namespace dlgn {

/// Matrix as CSV, 17 significant digits (lossless for f64).
void write_csv_matrix(const Matrix& m, const std::string& path);
Matrix read_csv_matrix(const std::string& path);

/// Table with a header row; cells already formatted.
void write_csv_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows,
                     const std::string& path);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

/// Extra key/value lines recorded next to a heatmap.
struct HeatmapMeta {
  double min = 0.0;
  double max = 0.0;
  std::string normalization = "minmax";
  std::vector<std::pair<std::string, std::string>> extra;
};

/// 8-bit binary PGM (P5) with min-max scaling; writes `path` and a
/// `path + ".meta"` sidecar recording the scaling. Requires finite entries.
void write_pgm_heatmap(const Matrix& m, const std::string& path,
                       HeatmapMeta meta = {});

}  // namespace dlgn
