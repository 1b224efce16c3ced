#pragma once

#include <stdexcept>
#include <utility>

#include "dlgn/types.hpp"

namespace dlgn {

/// Central-difference gradient estimate: (f(x + h e_i) - f(x - h e_i)) / 2h.
/// `loss_fn` must be deterministic.
template <typename F>
Vector finite_diff_grad(F&& loss_fn, const Vector& theta, double h = 1e-5) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be > 0");
  Vector grad(theta.size());
  Vector probe = theta;
  for (Index i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = loss_fn(probe);
    probe[i] = theta[i] - h;
    const double down = loss_fn(probe);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace dlgn
