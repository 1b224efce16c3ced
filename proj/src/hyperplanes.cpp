#include "dlgn/hyperplanes.hpp"

#include <stdexcept>

namespace dlgn {

std::vector<Hyperplane> dlgn_hyperplanes(const Architecture& arch,
                                         const ModelParams& params) {
  if (!arch.has_value_net())
    throw std::invalid_argument(
        "dlgn_hyperplanes: gates are globally affine in x only for DLGN "
        "variants");
  check_shapes(arch, params);

  std::vector<Hyperplane> planes;
  planes.reserve(static_cast<std::size_t>(arch.hidden_layers()) *
                 static_cast<std::size_t>(arch.hidden_width));

  // eta_l(x) = A_l x + k_l with A_1 = W_1, k_1 = b_1,
  // A_l = W_l A_{l-1}, k_l = W_l k_{l-1} + b_l.
  Matrix a = params.W[0];
  Vector k = Vector::Zero(arch.hidden_width);
  if (arch.use_bias) k = params.b[0];
  for (int l = 1; l <= arch.hidden_layers(); ++l) {
    if (l > 1) {
      const Matrix& w = params.W[static_cast<std::size_t>(l - 1)];
      a = w * a;
      k = w * k;
      if (arch.use_bias) k += params.b[static_cast<std::size_t>(l - 1)];
    }
    for (Index i = 0; i < arch.hidden_width; ++i)
      planes.push_back({l, static_cast<int>(i), a.row(i).transpose(), k[i]});
  }
  return planes;
}

}  // namespace dlgn
