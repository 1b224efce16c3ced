#include "dlgn/forward.hpp"

#include <stdexcept>

namespace dlgn {

namespace {

Matrix apply_gate(const Matrix& preact, GateMode mode) {
  if (mode.is_hard())
    return (preact.array() >= 0.0).cast<double>();
  return (1.0 / (1.0 + (-mode.beta * preact.array()).exp())).matrix();
}

Matrix affine(const Matrix& w, const Vector* bias, const Matrix& h) {
  Matrix out = w * h;
  if (bias != nullptr) out.colwise() += *bias;
  return out;
}

}  // namespace

ForwardTrace forward(const Architecture& arch, const ModelParams& params,
                     const Matrix& X, GateMode mode) {
  check_shapes(arch, params);
  if (X.rows() != arch.input_dim)
    throw std::invalid_argument("forward: input dimension mismatch");
  const int hidden = arch.hidden_layers();
  const Index n = X.cols();

  ForwardTrace trace;
  trace.input = X;
  trace.preact.reserve(static_cast<std::size_t>(hidden));
  trace.gates.reserve(static_cast<std::size_t>(hidden));
  trace.value_preact.reserve(static_cast<std::size_t>(hidden));
  trace.values.reserve(static_cast<std::size_t>(hidden) + 1);

  auto bias = [&](const std::vector<Vector>& stack, int l) -> const Vector* {
    return arch.use_bias ? &stack[static_cast<std::size_t>(l - 1)] : nullptr;
  };

  switch (arch.kind) {
    case ModelKind::Relu: {
      trace.values.push_back(X);
      for (int l = 1; l <= hidden; ++l) {
        Matrix a = affine(params.W[static_cast<std::size_t>(l - 1)],
                          bias(params.b, l), trace.values.back());
        Matrix g = apply_gate(a, mode);
        trace.values.push_back(g.cwiseProduct(a));
        trace.preact.push_back(a);
        trace.value_preact.push_back(std::move(a));
        trace.gates.push_back(std::move(g));
      }
      trace.output = affine(params.W.back(), bias(params.b, arch.num_layers),
                            trace.values.back());
      break;
    }
    case ModelKind::Dlgn:
    case ModelKind::DlgnPwc: {
      if (arch.kind == ModelKind::Dlgn)
        trace.values.push_back(X);
      else
        trace.values.push_back(Matrix::Ones(arch.input_dim, n));
      Matrix eta = X;
      for (int l = 1; l <= hidden; ++l) {
        eta = affine(params.W[static_cast<std::size_t>(l - 1)], bias(params.b, l),
                     eta);
        Matrix g = apply_gate(eta, mode);
        Matrix v = affine(params.U[static_cast<std::size_t>(l - 1)],
                          bias(params.c, l), trace.values.back());
        trace.values.push_back(g.cwiseProduct(v));
        trace.preact.push_back(eta);
        trace.value_preact.push_back(std::move(v));
        trace.gates.push_back(std::move(g));
      }
      trace.output = affine(params.U.back(), bias(params.c, arch.num_layers),
                            trace.values.back());
      break;
    }
    case ModelKind::Dln: {
      trace.values.push_back(X);
      for (int l = 1; l <= hidden; ++l) {
        Matrix a = affine(params.W[static_cast<std::size_t>(l - 1)],
                          bias(params.b, l), trace.values.back());
        trace.values.push_back(a);
        trace.gates.push_back(Matrix::Ones(a.rows(), a.cols()));
        trace.preact.push_back(a);
        trace.value_preact.push_back(std::move(a));
      }
      trace.output = affine(params.W.back(), bias(params.b, arch.num_layers),
                            trace.values.back());
      break;
    }
  }
  return trace;
}

Vector forward_one(const Architecture& arch, const ModelParams& params,
                   const Vector& x, GateMode mode) {
  return forward(arch, params, x, mode).output.col(0);
}

}  // namespace dlgn
