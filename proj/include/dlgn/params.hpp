#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/rng.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

struct FreezeFlags {
  bool gates_frozen = false;
  bool values_frozen = false;
};

/// Per-layer weights. W/b is the primary (gating) network for all kinds;
/// U/c is the value network, allocated only for DLGN variants. For DLGN the
/// head weights live in U_L; W_L is kept for shape parity and never trained.
struct ModelParams {
  std::vector<Matrix> W;
  std::vector<Vector> b;  // empty when use_bias is off
  std::vector<Matrix> U;
  std::vector<Vector> c;
  FreezeFlags freeze;
};

/// He-Gaussian weights, zero biases; W and U drawn from independent derived
/// streams of `rng` so the two networks decorrelate.
ModelParams init_params(const Architecture& arch, const Rng& rng);

/// Throws std::invalid_argument if shapes disagree with the architecture.
void check_shapes(const Architecture& arch, const ModelParams& params);

/// Flattens unfrozen parameter groups into one vector
/// (order: W_1..W_L row-major, b_1..b_L, U_1..U_L, c_1..c_L).
Vector flatten_trainable(const Architecture& arch, const ModelParams& params);

/// Inverse of flatten_trainable; frozen groups are left untouched.
void set_trainable(const Architecture& arch, ModelParams& params,
                   const Vector& flat);

/// Binary checkpoint, stable layout (see docs/checkpoint_format.md):
/// magic "DLGNCKPT", u32 version, u32 kind/d/m/L/out/use_bias, then row-major
/// little-endian f64 matrices W_1..W_L (each followed by its bias when
/// use_bias), then U_1..U_L likewise for DLGN variants.
void save_checkpoint(const Architecture& arch, const ModelParams& params,
                     const std::string& path);
std::pair<Architecture, ModelParams> load_checkpoint(const std::string& path);

}  // namespace dlgn
