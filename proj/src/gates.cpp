#include "dlgn/gates.hpp"

#include <stdexcept>

#include "dlgn/forward.hpp"

namespace dlgn {

GateTensor gate_tensor(const Architecture& arch, const ModelParams& params,
                       const Matrix& X) {
  if (!arch.has_gates())
    throw std::invalid_argument("gate_tensor: DLN has no gates");
  const ForwardTrace trace = forward(arch, params, X, GateMode::hard());
  GateTensor tensor;
  tensor.num_inputs = X.cols();
  tensor.width = arch.hidden_width;
  tensor.layers.reserve(trace.gates.size());
  for (const Matrix& g : trace.gates) tensor.layers.push_back(g.transpose());
  return tensor;
}

}  // namespace dlgn
