#pragma once

#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/gates.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

enum class KernelKind { Layer, Overlap, Ntk };

struct KernelMatrix {
  Matrix values;  // n x n
  KernelKind kind = KernelKind::Layer;
  bool normalized = false;
};

/// K_l = G_l G_l^T: entry (a,b) counts layer-l neurons active for both
/// inputs. `layer` is 1-based.
KernelMatrix layer_kernel(const GateTensor& gates, int layer);

/// Overlap kernel: entrywise product of the per-layer kernels. Entries are
/// exact path-intersection counts (integers stored as doubles).
KernelMatrix overlap_kernel(const GateTensor& gates);

/// Empirical NTK over unfrozen parameters: <grad_theta yhat(x_a),
/// grad_theta yhat(x_b)>, averaged over output units for multi-output
/// heads. Hard DLGN gates contribute zero gating-network gradient.
KernelMatrix empirical_ntk(const Architecture& arch, const ModelParams& params,
                           const Matrix& X, GateMode mode);

/// Diagonal of the empirical NTK without forming the full matrix.
Vector empirical_ntk_diag(const Architecture& arch, const ModelParams& params,
                          const Matrix& X, GateMode mode);

/// K * n / trace(K): the diagonal mean becomes 1. Throws when trace <= 0.
KernelMatrix trace_normalize(const KernelMatrix& kernel);

/// Input-region tag shared by the circle halves and FMNIST class groups.
enum class Region { Simple, Complex };

struct RegionStats {
  double mean_diag_simple = 0.0;
  double mean_diag_complex = 0.0;
  double mean_block_ss = 0.0;
  double mean_block_cc = 0.0;
  double mean_block_sc = 0.0;
};

/// Per-region diagonal means and block means; both regions must be
/// non-empty.
RegionStats region_stats(const KernelMatrix& kernel,
                         const std::vector<Region>& tags);

/// Averages kernel entries over label blocks (labels are 1-based class ids),
/// producing the class-by-class summary matrix.
Matrix class_averaged_kernel(const KernelMatrix& kernel,
                             const std::vector<int>& labels, int num_classes);

/// max |K - K^T| entry relative to max(1, |entry|).
double symmetry_error(const Matrix& k);

/// Smallest eigenvalue via a dense self-adjoint solve.
double min_eigenvalue(const Matrix& k);

}  // namespace dlgn
