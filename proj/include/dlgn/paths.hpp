#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

/// One hidden node per hidden layer, 0-based indices.
using Path = std::vector<int>;

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// m^(L-1), throwing (and naming the cap) when it exceeds `cap`.
std::size_t path_count(int m, int L, std::size_t cap = kDefaultPathCap);

/// All m^(L-1) paths in lexicographic order.
std::vector<Path> enumerate_paths(int m, int L,
                                  std::size_t cap = kDefaultPathCap);

/// Hard gating bit f_pi(x): product of the per-layer gate indicators along
/// the path. Always 1 for DLN.
int path_gate(const Architecture& arch, const ModelParams& params,
              const Vector& x, const Path& path);

/// Expert value g_pi(x), one entry per output unit: the product of edge
/// weights along the path times the first-layer inner product with x (the
/// all-ones vector for DLGN-PWC). Bias-free networks only.
Vector path_value(const Architecture& arch, const ModelParams& params,
                  const Vector& x, const Path& path);

/// Brute-force MoE prediction: sum over all paths of f_pi(x) g_pi(x).
Vector moe_sum(const Architecture& arch, const ModelParams& params,
               const Vector& x, std::size_t cap = kDefaultPathCap);

/// A(x) as a bitset over lexicographic path order.
struct ActiveSet {
  std::vector<std::uint8_t> bits;
  std::size_t count = 0;
};

ActiveSet active_set(const Architecture& arch, const ModelParams& params,
                     const Vector& x, std::size_t cap = kDefaultPathCap);

/// |A(x) ∩ A(x')| by joint enumeration.
std::size_t overlap_bruteforce(const Architecture& arch,
                               const ModelParams& params, const Vector& x,
                               const Vector& x_other,
                               std::size_t cap = kDefaultPathCap);

/// Concatenated per-layer gate bits, layer-major then neuron order.
std::vector<std::uint8_t> activation_pattern(const Architecture& arch,
                                             const ModelParams& params,
                                             const Vector& x);

/// Number of unique activation patterns over the columns of X.
std::size_t count_distinct_patterns(const Architecture& arch,
                                    const ModelParams& params,
                                    const Matrix& X);

}  // namespace dlgn
