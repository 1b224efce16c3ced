#include "dlgn/kernels.hpp"

#include <stdexcept>

#include "dlgn/backprop.hpp"
#include "dlgn/forward.hpp"

namespace dlgn {

KernelMatrix layer_kernel(const GateTensor& gates, int layer) {
  if (layer < 1 || layer > static_cast<int>(gates.layers.size()))
    throw std::invalid_argument("layer_kernel: layer out of range");
  const Matrix& g = gates.layers[static_cast<std::size_t>(layer - 1)];
  return {g * g.transpose(), KernelKind::Layer, false};
}

KernelMatrix overlap_kernel(const GateTensor& gates) {
  if (gates.layers.empty())
    throw std::invalid_argument("overlap_kernel: empty gate tensor");
  Matrix lambda = Matrix::Ones(gates.num_inputs, gates.num_inputs);
  for (const Matrix& g : gates.layers)
    lambda = lambda.cwiseProduct(Matrix(g * g.transpose()));
  return {std::move(lambda), KernelKind::Overlap, false};
}

namespace {

/// Accumulates sum_k <grad yhat_k(x_a), grad yhat_k(x_b)> / out using the
/// outer-product structure of per-input gradients: for each parameter group,
/// <delta_a act_a^T, delta_b act_b^T>_F = <delta_a, delta_b><act_a, act_b>.
void accumulate_ntk(const Architecture& arch, const ModelParams& params,
                    const Matrix& X, GateMode mode, Matrix* full,
                    Vector* diag) {
  const ForwardTrace trace = forward(arch, params, X, mode);
  const Index n = X.cols();
  const double scale = 1.0 / static_cast<double>(arch.output_dim);
  for (Index k = 0; k < arch.output_dim; ++k) {
    Matrix dY = Matrix::Zero(arch.output_dim, n);
    dY.row(k).setOnes();
    const GradFactors factors = backward_factors(arch, params, trace, dY, mode);
    for (const GradFactors::Group& g : factors.groups) {
      if (full != nullptr) {
        const Matrix dd = g.delta.transpose() * g.delta;
        const Matrix aa = g.act.transpose() * g.act;
        full->noalias() += scale * dd.cwiseProduct(aa);
        if (arch.use_bias) full->noalias() += scale * dd;
      }
      if (diag != nullptr) {
        const Vector dd = g.delta.colwise().squaredNorm().transpose();
        const Vector aa = g.act.colwise().squaredNorm().transpose();
        diag->array() += scale * dd.array() * aa.array();
        if (arch.use_bias) diag->array() += scale * dd.array();
      }
    }
  }
}

}  // namespace

KernelMatrix empirical_ntk(const Architecture& arch, const ModelParams& params,
                           const Matrix& X, GateMode mode) {
  if (X.cols() == 0) throw std::invalid_argument("empirical_ntk: empty input");
  Matrix ntk = Matrix::Zero(X.cols(), X.cols());
  accumulate_ntk(arch, params, X, mode, &ntk, nullptr);
  return {std::move(ntk), KernelKind::Ntk, false};
}

Vector empirical_ntk_diag(const Architecture& arch, const ModelParams& params,
                          const Matrix& X, GateMode mode) {
  if (X.cols() == 0)
    throw std::invalid_argument("empirical_ntk_diag: empty input");
  Vector diag = Vector::Zero(X.cols());
  accumulate_ntk(arch, params, X, mode, nullptr, &diag);
  return diag;
}

KernelMatrix trace_normalize(const KernelMatrix& kernel) {
  const double tr = kernel.values.trace();
  if (!(tr > 0.0))
    throw std::invalid_argument("trace_normalize: trace must be positive");
  const double n = static_cast<double>(kernel.values.rows());
  return {kernel.values * (n / tr), kernel.kind, true};
}

RegionStats region_stats(const KernelMatrix& kernel,
                         const std::vector<Region>& tags) {
  const Index n = kernel.values.rows();
  if (static_cast<Index>(tags.size()) != n)
    throw std::invalid_argument("region_stats: tag count mismatch");

  double diag_s = 0.0, diag_c = 0.0, ss = 0.0, cc = 0.0, sc = 0.0;
  std::size_t n_s = 0, n_c = 0, n_ss = 0, n_cc = 0, n_sc = 0;
  for (Index i = 0; i < n; ++i) {
    if (tags[static_cast<std::size_t>(i)] == Region::Simple) {
      diag_s += kernel.values(i, i);
      ++n_s;
    } else {
      diag_c += kernel.values(i, i);
      ++n_c;
    }
    for (Index j = 0; j < n; ++j) {
      const bool si = tags[static_cast<std::size_t>(i)] == Region::Simple;
      const bool sj = tags[static_cast<std::size_t>(j)] == Region::Simple;
      if (si && sj) {
        ss += kernel.values(i, j);
        ++n_ss;
      } else if (!si && !sj) {
        cc += kernel.values(i, j);
        ++n_cc;
      } else {
        sc += kernel.values(i, j);
        ++n_sc;
      }
    }
  }
  if (n_s == 0 || n_c == 0)
    throw std::invalid_argument("region_stats: a region has zero members");
  return {diag_s / static_cast<double>(n_s), diag_c / static_cast<double>(n_c),
          ss / static_cast<double>(n_ss), cc / static_cast<double>(n_cc),
          sc / static_cast<double>(n_sc)};
}

Matrix class_averaged_kernel(const KernelMatrix& kernel,
                             const std::vector<int>& labels, int num_classes) {
  const Index n = kernel.values.rows();
  if (static_cast<Index>(labels.size()) != n)
    throw std::invalid_argument("class_averaged_kernel: label count mismatch");
  Matrix sums = Matrix::Zero(num_classes, num_classes);
  Matrix counts = Matrix::Zero(num_classes, num_classes);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const int ci = labels[static_cast<std::size_t>(i)] - 1;
      const int cj = labels[static_cast<std::size_t>(j)] - 1;
      if (ci < 0 || ci >= num_classes || cj < 0 || cj >= num_classes)
        throw std::invalid_argument("class_averaged_kernel: label out of range");
      sums(ci, cj) += kernel.values(i, j);
      counts(ci, cj) += 1.0;
    }
  for (int a = 0; a < num_classes; ++a)
    for (int b = 0; b < num_classes; ++b)
      if (counts(a, b) > 0.0) sums(a, b) /= counts(a, b);
  return sums;
}

double symmetry_error(const Matrix& k) {
  double worst = 0.0;
  for (Index i = 0; i < k.rows(); ++i)
    for (Index j = 0; j < k.cols(); ++j) {
      const double denom = std::max(1.0, std::abs(k(i, j)));
      worst = std::max(worst, std::abs(k(i, j) - k(j, i)) / denom);
    }
  return worst;
}

double min_eigenvalue(const Matrix& k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (k + k.transpose()),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_eigenvalue: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

}  // namespace dlgn
