#pragma once

#include <string>
#include <vector>

#include "dlgn/kernels.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// Unit-circle regression set: x_i = (cos t_i, sin t_i) at equispaced angles,
/// target sin(t) on the low-frequency half (t < pi) and sin(pi + 9(t - pi))
/// on the high-frequency half. Points are ordered by ascending angle.
struct CircleDataset {
  std::vector<double> angles;  // radians in [0, 2*pi)
  Matrix X;                    // 2 x n
  Vector y;                    // n
  std::vector<Region> regions; // Simple = low-frequency half
};

CircleDataset gen_circle(int n);

/// Evaluates the circle target at one angle (radians).
double circle_target(double angle);

/// CSV with header "angle,x1,x2,y,region".
void write_circle_csv(const CircleDataset& data, const std::string& path);

}  // namespace dlgn
