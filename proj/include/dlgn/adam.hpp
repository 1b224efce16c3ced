#pragma once

#include <cmath>
#include <stdexcept>

#include "dlgn/types.hpp"

namespace dlgn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Per-parameter moment accumulators. Lazily shaped on first step.
template <typename T>
struct AdamState {
  T first_moment;
  T second_moment;
  long step_count = 0;
};

/// One Adam update with bias correction:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   theta <- theta - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
template <typename T>
void adam_step(T& param, const T& grad, AdamState<T>& state,
               const AdamConfig& cfg) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols())
    throw std::invalid_argument("adam_step: parameter/gradient shape mismatch");
  if (state.step_count == 0) {
    state.first_moment = T::Zero(param.rows(), param.cols());
    state.second_moment = T::Zero(param.rows(), param.cols());
  } else if (state.first_moment.rows() != param.rows() ||
             state.first_moment.cols() != param.cols()) {
    throw std::invalid_argument("adam_step: state/parameter shape mismatch");
  }
  ++state.step_count;
  state.first_moment = cfg.beta1 * state.first_moment + (1.0 - cfg.beta1) * grad;
  state.second_moment.array() = cfg.beta2 * state.second_moment.array() +
                                (1.0 - cfg.beta2) * grad.array().square();
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  param.array() -= cfg.lr * (state.first_moment.array() / bc1) /
                   ((state.second_moment.array() / bc2).sqrt() + cfg.epsilon);
}

}  // namespace dlgn
