#include "dlgn/backprop.hpp"

#include <cmath>
#include <stdexcept>

namespace dlgn {

namespace {

/// d h / d a for the ReLU family: 1(a >= 0) under hard gating, and the
/// swish-style derivative sigma(ba) + ba sigma(ba)(1 - sigma(ba)) under soft.
Matrix relu_gate_derivative(const Matrix& preact, const Matrix& gate,
                            GateMode mode) {
  if (mode.is_hard()) return gate;
  return gate.array() +
         mode.beta * preact.array() * gate.array() * (1.0 - gate.array());
}

}  // namespace

GradFactors backward_factors(const Architecture& arch,
                             const ModelParams& params,
                             const ForwardTrace& trace, const Matrix& dY,
                             GateMode mode) {
  const int hidden = arch.hidden_layers();
  const bool gates_on = !params.freeze.gates_frozen;
  const bool values_on = !params.freeze.values_frozen;

  GradFactors factors;
  auto emit = [&](ParamTensor tensor, int layer, Matrix delta, Matrix act) {
    factors.groups.push_back({tensor, layer, std::move(delta), std::move(act)});
  };

  switch (arch.kind) {
    case ModelKind::Relu:
    case ModelKind::Dln: {
      // Single chain through W; for DLN the gate derivative is identity.
      if (!gates_on) break;
      Matrix delta = dY;
      emit(ParamTensor::W, arch.num_layers, delta, trace.values.back());
      Matrix dh = params.W.back().transpose() * delta;
      for (int l = hidden; l >= 1; --l) {
        const std::size_t i = static_cast<std::size_t>(l - 1);
        Matrix da;
        if (arch.kind == ModelKind::Dln)
          da = std::move(dh);
        else
          da = relu_gate_derivative(trace.preact[i], trace.gates[i], mode)
                   .cwiseProduct(dh);
        emit(ParamTensor::W, l, da, trace.values[i]);
        if (l > 1) dh = params.W[i].transpose() * da;
      }
      break;
    }
    case ModelKind::Dlgn:
    case ModelKind::DlgnPwc: {
      // Value chain through U, with gate pullbacks feeding the linear
      // gating chain through W.
      std::vector<Matrix> gate_pull(static_cast<std::size_t>(hidden));
      if (values_on)
        emit(ParamTensor::U, arch.num_layers, dY, trace.values.back());
      Matrix dh = params.U.back().transpose() * dY;
      for (int l = hidden; l >= 1; --l) {
        const std::size_t i = static_cast<std::size_t>(l - 1);
        const Matrix& gate = trace.gates[i];
        Matrix dv = gate.cwiseProduct(dh);
        if (gates_on && mode.is_soft()) {
          // dL/deta_l from the gate: beta g (1-g) .* (v .* dh)
          gate_pull[i] = (mode.beta * gate.array() * (1.0 - gate.array()) *
                          trace.value_preact[i].array() * dh.array())
                             .matrix();
        }
        if (values_on) emit(ParamTensor::U, l, dv, trace.values[i]);
        if (l > 1) dh = params.U[i].transpose() * dv;
      }
      if (gates_on && mode.is_soft()) {
        Matrix deta;
        for (int l = hidden; l >= 1; --l) {
          const std::size_t i = static_cast<std::size_t>(l - 1);
          if (deta.size() == 0)
            deta = gate_pull[i];
          else
            deta += gate_pull[i];
          const Matrix& eta_in = l == 1 ? trace.input : trace.preact[i - 1];
          emit(ParamTensor::W, l, deta, eta_in);
          if (l > 1) deta = (params.W[i].transpose() * deta).eval();
        }
      }
      break;
    }
  }
  return factors;
}

namespace {

Matrix softmax_columns(const Matrix& logits) {
  Matrix p = logits;
  for (Index a = 0; a < p.cols(); ++a) {
    const double m = p.col(a).maxCoeff();
    p.col(a) = (p.col(a).array() - m).exp();
    p.col(a) /= p.col(a).sum();
  }
  return p;
}

void validate_batch(const Architecture& arch, const Batch& batch,
                    LossKind kind) {
  if (batch.X.cols() == 0)
    throw std::invalid_argument("loss: batch must be nonempty");
  if (kind == LossKind::Mse) {
    if (batch.Y.rows() != arch.output_dim || batch.Y.cols() != batch.X.cols())
      throw std::invalid_argument("loss: target shape mismatch");
  } else {
    if (static_cast<Index>(batch.labels.size()) != batch.X.cols())
      throw std::invalid_argument("loss: label count mismatch");
    for (int label : batch.labels)
      if (label < 0 || label >= arch.output_dim)
        throw std::invalid_argument("loss: label out of range");
  }
}

double loss_from_output(const Matrix& output, const Batch& batch,
                        LossKind kind, Matrix* dY) {
  const double n = static_cast<double>(output.cols());
  if (kind == LossKind::Mse) {
    const Matrix residual = output - batch.Y;
    if (dY != nullptr) *dY = residual / n;
    return 0.5 * residual.squaredNorm() / n;
  }
  const Matrix p = softmax_columns(output);
  double loss = 0.0;
  for (Index a = 0; a < output.cols(); ++a)
    loss -= std::log(std::max(p(batch.labels[static_cast<std::size_t>(a)], a),
                              1e-300));
  if (dY != nullptr) {
    *dY = p;
    for (Index a = 0; a < output.cols(); ++a)
      (*dY)(batch.labels[static_cast<std::size_t>(a)], a) -= 1.0;
    *dY /= n;
  }
  return loss / n;
}

}  // namespace

double batch_loss(const Architecture& arch, const ModelParams& params,
                  const Batch& batch, GateMode mode, LossKind kind) {
  validate_batch(arch, batch, kind);
  const ForwardTrace trace = forward(arch, params, batch.X, mode);
  return loss_from_output(trace.output, batch, kind, nullptr);
}

double output_loss(const Matrix& output, const Batch& batch, LossKind kind) {
  return loss_from_output(output, batch, kind, nullptr);
}

std::pair<double, Gradients> loss_and_grads(const Architecture& arch,
                                            const ModelParams& params,
                                            const Batch& batch, GateMode mode,
                                            LossKind kind) {
  validate_batch(arch, batch, kind);
  if (arch.has_value_net() && mode.is_hard() && !params.freeze.gates_frozen)
    throw std::invalid_argument(
        "hard gates are non-differentiable; freeze gates or use SOFT");

  const ForwardTrace trace = forward(arch, params, batch.X, mode);
  Matrix dY;
  const double loss = loss_from_output(trace.output, batch, kind, &dY);
  const GradFactors factors = backward_factors(arch, params, trace, dY, mode);

  Gradients grads;
  grads.W.reserve(params.W.size());
  for (const Matrix& w : params.W) grads.W.push_back(Matrix::Zero(w.rows(), w.cols()));
  for (const Vector& v : params.b) grads.b.push_back(Vector::Zero(v.size()));
  for (const Matrix& u : params.U) grads.U.push_back(Matrix::Zero(u.rows(), u.cols()));
  for (const Vector& v : params.c) grads.c.push_back(Vector::Zero(v.size()));

  for (const GradFactors::Group& g : factors.groups) {
    const std::size_t i = static_cast<std::size_t>(g.layer - 1);
    if (g.tensor == ParamTensor::W) {
      grads.W[i] = g.delta * g.act.transpose();
      if (arch.use_bias) grads.b[i] = g.delta.rowwise().sum();
    } else {
      grads.U[i] = g.delta * g.act.transpose();
      if (arch.use_bias) grads.c[i] = g.delta.rowwise().sum();
    }
  }
  return {loss, grads};
}

double mean_squared_error(const Matrix& yhat, const Matrix& y) {
  if (yhat.rows() != y.rows() || yhat.cols() != y.cols())
    throw std::invalid_argument("mean_squared_error: shape mismatch");
  return (yhat - y).squaredNorm() / static_cast<double>(y.cols());
}

double accuracy(const Matrix& yhat, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != yhat.cols())
    throw std::invalid_argument("accuracy: label count mismatch");
  Index correct = 0;
  for (Index a = 0; a < yhat.cols(); ++a) {
    Index best = 0;
    yhat.col(a).maxCoeff(&best);
    if (best == labels[static_cast<std::size_t>(a)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(yhat.cols());
}

}  // namespace dlgn
