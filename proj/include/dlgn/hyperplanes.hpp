#pragma once

#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// Affine form of one DLGN gating neuron in input space:
/// eta_{layer,neuron}(x) = normal . x + offset, active on >= 0.
struct Hyperplane {
  int layer = 1;   // 1-based hidden layer
  int neuron = 0;  // 0-based within the layer
  Vector normal;
  double offset = 0.0;
};

/// Unrolls the linear gating chain: layer l rows of W_l ... W_1 with the
/// composed bias. Only DLGN variants have globally affine gates; ReLU and
/// DLN are rejected.
std::vector<Hyperplane> dlgn_hyperplanes(const Architecture& arch,
                                         const ModelParams& params);

}  // namespace dlgn
