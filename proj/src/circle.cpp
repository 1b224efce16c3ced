#include "dlgn/circle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlgn/export.hpp"

namespace dlgn {

double circle_target(double angle) {
  if (angle < std::numbers::pi) return std::sin(angle);
  return std::sin(std::numbers::pi + 9.0 * (angle - std::numbers::pi));
}

CircleDataset gen_circle(int n) {
  if (n < 2) throw std::invalid_argument("gen_circle: need n >= 2");
  CircleDataset data;
  data.angles.resize(static_cast<std::size_t>(n));
  data.X.resize(2, n);
  data.y.resize(n);
  data.regions.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    data.angles[static_cast<std::size_t>(i)] = angle;
    data.X(0, i) = std::cos(angle);
    data.X(1, i) = std::sin(angle);
    data.y[i] = circle_target(angle);
    data.regions[static_cast<std::size_t>(i)] =
        angle < std::numbers::pi ? Region::Simple : Region::Complex;
  }
  return data;
}

void write_circle_csv(const CircleDataset& data, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(data.angles.size());
  for (std::size_t i = 0; i < data.angles.size(); ++i) {
    const Index idx = static_cast<Index>(i);
    rows.push_back({format_double(data.angles[i]), format_double(data.X(0, idx)),
                    format_double(data.X(1, idx)), format_double(data.y[idx]),
                    data.regions[i] == Region::Simple ? "low" : "high"});
  }
  write_csv_table({"angle", "x1", "x2", "y", "region"}, rows, path);
}

}  // namespace dlgn
