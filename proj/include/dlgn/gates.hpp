#pragma once

#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// Hard gate activations over a batch: layers[l](a, i) is the {0,1} gate of
/// neuron i in hidden layer l+1 for input a (inputs are rows here, which
/// makes each layer a ready-made Gram factor).
struct GateTensor {
  std::vector<Matrix> layers;  // each n x m
  Index num_inputs = 0;
  Index width = 0;
};

/// 1(pre-activation >= 0) per neuron, layer, and input. Zero counts as
/// active. Throws for DLN, which has no gates.
GateTensor gate_tensor(const Architecture& arch, const ModelParams& params,
                       const Matrix& X);

}  // namespace dlgn
