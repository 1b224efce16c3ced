#pragma once

#include <cmath>
#include <stdexcept>

#include "dlgn/rng.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// He-style Gaussian init: i.i.d. N(0, 2/cols) entries, filled row by row so
/// the sample stream maps to entries deterministically.
inline Matrix he_gaussian_init(Index rows, Index cols, Rng& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("he_gaussian_init: rows and cols must be >= 1");
  const double stddev = std::sqrt(2.0 / static_cast<double>(cols));
  Matrix w(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) w(i, j) = stddev * rng.gaussian();
  return w;
}

inline Vector zero_init(Index n) { return Vector::Zero(n); }

}  // namespace dlgn
