#pragma once

// Shared helpers for the test binaries.

#include <cstdint>
#include <utility>

#include "dlgn/backprop.hpp"
#include "dlgn/finite_diff.hpp"
#include "dlgn/forward.hpp"
#include "dlgn/params.hpp"
#include "dlgn/rng.hpp"

namespace dlgn::testutil {

inline Architecture make_arch(ModelKind kind, Index d, Index m, int L,
                              Index out = 1, bool bias = false) {
  Architecture arch;
  arch.kind = kind;
  arch.input_dim = d;
  arch.hidden_width = m;
  arch.num_layers = L;
  arch.output_dim = out;
  arch.use_bias = bias;
  return arch;
}

inline Matrix random_inputs(Index d, Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(d, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < d; ++i) x(i, j) = rng.gaussian();
  return x;
}

/// Gradients flattened in the same order as flatten_trainable.
inline Vector flatten_grads(const Architecture& arch, const ModelParams& params,
                            const Gradients& grads) {
  std::vector<double> flat;
  const auto push_stack = [&](const std::vector<Matrix>& ws,
                              const std::vector<Vector>& bs) {
    for (const Matrix& w : ws)
      for (Index i = 0; i < w.rows(); ++i)
        for (Index j = 0; j < w.cols(); ++j) flat.push_back(w(i, j));
    for (const Vector& v : bs)
      for (Index i = 0; i < v.size(); ++i) flat.push_back(v[i]);
  };
  if (!params.freeze.gates_frozen) push_stack(grads.W, grads.b);
  if (arch.has_value_net() && !params.freeze.values_frozen)
    push_stack(grads.U, grads.c);
  Vector out(static_cast<Index>(flat.size()));
  for (std::size_t i = 0; i < flat.size(); ++i)
    out[static_cast<Index>(i)] = flat[i];
  return out;
}

/// Smallest |gating pre-activation| over all layers and inputs; finite
/// differences on hard gates are only trustworthy away from the threshold.
inline double preact_margin(const Architecture& arch, const ModelParams& params,
                            const Matrix& X, GateMode mode) {
  const ForwardTrace trace = forward(arch, params, X, mode);
  double margin = 1e300;
  for (const Matrix& p : trace.preact)
    margin = std::min(margin, p.cwiseAbs().minCoeff());
  return margin;
}

/// Worst per-entry relative error between analytic and central-difference
/// gradients (relative floor 1e-3).
inline double grad_check(const Architecture& arch, const ModelParams& params,
                         const Batch& batch, GateMode mode, LossKind kind,
                         double h = 1e-5) {
  const Vector theta = flatten_trainable(arch, params);
  const auto loss_fn = [&](const Vector& t) {
    ModelParams probe = params;
    set_trainable(arch, probe, t);
    return batch_loss(arch, probe, batch, mode, kind);
  };
  const Vector fd = finite_diff_grad(loss_fn, theta, h);
  const auto [loss, grads] = loss_and_grads(arch, params, batch, mode, kind);
  const Vector analytic = flatten_grads(arch, params, grads);
  REQUIRE(analytic.size() == fd.size());
  double worst = 0.0;
  for (Index i = 0; i < fd.size(); ++i) {
    const double denom = std::max(1e-3, std::abs(fd[i]));
    worst = std::max(worst, std::abs(analytic[i] - fd[i]) / denom);
  }
  return worst;
}

}  // namespace dlgn::testutil
