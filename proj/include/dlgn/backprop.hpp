#pragma once

#include <utility>
#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/forward.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

enum class LossKind { Mse, SoftmaxCe };

/// Training batch. For Mse, Y holds targets (out x n); for SoftmaxCe,
/// labels holds 0-based class indices.
struct Batch {
  Matrix X;
  Matrix Y;
  std::vector<int> labels;
};

struct Gradients {
  std::vector<Matrix> W;
  std::vector<Vector> b;
  std::vector<Matrix> U;
  std::vector<Vector> c;
};

/// Which network a parameter group belongs to.
enum class ParamTensor { W, U };

/// Per-input gradient factors of one scalar (a loss or one output unit):
/// the gradient w.r.t. a weight matrix at input a is the outer product
/// delta.col(a) * act.col(a)^T, and delta.col(a) alone for its bias.
/// Frozen groups are omitted.
struct GradFactors {
  struct Group {
    ParamTensor tensor;
    int layer;   // 1-based
    Matrix delta;  // rows x n
    Matrix act;    // fan_in x n
  };
  std::vector<Group> groups;
};

/// Reverse pass seeded with dY (out x n); columns stay independent so the
/// factors carry per-input gradients. Hard DLGN gates contribute zero
/// gradient to the gating network.
GradFactors backward_factors(const Architecture& arch,
                             const ModelParams& params,
                             const ForwardTrace& trace, const Matrix& dY,
                             GateMode mode);

/// Mean loss over the batch: (1/n) sum of 1/2 |yhat - y|^2 for Mse, or
/// softmax cross-entropy for SoftmaxCe.
double batch_loss(const Architecture& arch, const ModelParams& params,
                  const Batch& batch, GateMode mode, LossKind kind);

/// Same loss computed from already-forwarded outputs.
double output_loss(const Matrix& output, const Batch& batch, LossKind kind);

/// Loss plus analytic gradients with frozen groups zeroed. Training a DLGN
/// variant with hard gates and unfrozen gates is rejected: hard gates are
/// non-differentiable, so the gating network would silently not train.
std::pair<double, Gradients> loss_and_grads(const Architecture& arch,
                                            const ModelParams& params,
                                            const Batch& batch, GateMode mode,
                                            LossKind kind);

/// Plain mean squared error (no 1/2 factor), as plotted in loss curves.
double mean_squared_error(const Matrix& yhat, const Matrix& y);

/// Fraction of argmax-correct columns.
double accuracy(const Matrix& yhat, const std::vector<int>& labels);

}  // namespace dlgn
