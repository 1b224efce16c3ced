#pragma once

#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// Batched forward pass record; inputs are columns throughout.
///   preact[l]      gating pre-activation of hidden layer l+1
///                  (eta_l for DLGN/DLN, W_l h_{l-1} + b_l for ReLU)
///   gates[l]       gate values in [0,1] ({0,1} under hard gating; all-ones
///                  for DLN)
///   values[l]      value-path activation h_l, l = 0..L-1 (values[0] is the
///                  input, or all-ones for DLGN-PWC)
///   value_preact[l] U_l h_{l-1} + c_l for DLGN variants; aliases preact for
///                  ReLU/DLN
struct ForwardTrace {
  Matrix input;  // the raw X (eta_0), distinct from values[0] for DLGN-PWC
  std::vector<Matrix> preact;
  std::vector<Matrix> gates;
  std::vector<Matrix> values;
  std::vector<Matrix> value_preact;
  Matrix output;  // out x n
};

/// Runs the architecture on a batch X (d x n).
///   RELU      h_l = gate(a_l) .* a_l,  a_l = W_l h_{l-1} + b_l
///   DLGN      eta_l = W_l eta_{l-1} + b_l;  h_l = gate(eta_l) .* (U_l h_{l-1} + c_l)
///   DLGN_PWC  same with h_0 = all-ones
///   DLN       plain linear chain, gates identically 1
ForwardTrace forward(const Architecture& arch, const ModelParams& params,
                     const Matrix& X, GateMode mode);

/// Single-input convenience wrapper.
Vector forward_one(const Architecture& arch, const ModelParams& params,
                   const Vector& x, GateMode mode);

}  // namespace dlgn
