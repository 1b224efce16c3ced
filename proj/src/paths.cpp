#include "dlgn/paths.hpp"

#include <set>
#include <stdexcept>
#include <string>

#include "dlgn/forward.hpp"
#include "dlgn/gates.hpp"

namespace dlgn {

std::size_t path_count(int m, int L, std::size_t cap) {
  if (m < 1 || L < 2) throw std::invalid_argument("path_count: need m >= 1, L >= 2");
  std::size_t count = 1;
  for (int l = 0; l < L - 1; ++l) {
    if (count > cap / static_cast<std::size_t>(m))
      throw std::invalid_argument("path_count: m^(L-1) exceeds the path cap of " +
                                  std::to_string(cap));
    count *= static_cast<std::size_t>(m);
  }
  return count;
}

std::vector<Path> enumerate_paths(int m, int L, std::size_t cap) {
  const std::size_t total = path_count(m, L, cap);
  const int hidden = L - 1;
  std::vector<Path> paths;
  paths.reserve(total);
  Path current(static_cast<std::size_t>(hidden), 0);
  for (std::size_t p = 0; p < total; ++p) {
    paths.push_back(current);
    // lexicographic increment, last index fastest
    for (int l = hidden - 1; l >= 0; --l) {
      if (++current[static_cast<std::size_t>(l)] < m) break;
      current[static_cast<std::size_t>(l)] = 0;
    }
  }
  return paths;
}

namespace {

void check_path(const Architecture& arch, const Path& path) {
  if (static_cast<int>(path.size()) != arch.hidden_layers())
    throw std::invalid_argument("path: wrong length");
  for (int node : path)
    if (node < 0 || node >= arch.hidden_width)
      throw std::invalid_argument("path: node index out of range");
}

/// Per-layer hard gate bits at a single input, as L-1 rows of {0,1}.
std::vector<Vector> gate_bits(const Architecture& arch,
                              const ModelParams& params, const Vector& x) {
  const ForwardTrace trace = forward(arch, params, x, GateMode::hard());
  std::vector<Vector> bits;
  bits.reserve(trace.gates.size());
  for (const Matrix& g : trace.gates) bits.push_back(g.col(0));
  return bits;
}

}  // namespace

int path_gate(const Architecture& arch, const ModelParams& params,
              const Vector& x, const Path& path) {
  check_path(arch, path);
  if (arch.kind == ModelKind::Dln) return 1;
  const std::vector<Vector> bits = gate_bits(arch, params, x);
  for (std::size_t l = 0; l < path.size(); ++l)
    if (bits[l][path[l]] == 0.0) return 0;
  return 1;
}

Vector path_value(const Architecture& arch, const ModelParams& params,
                  const Vector& x, const Path& path) {
  check_path(arch, path);
  if (arch.use_bias)
    throw std::invalid_argument(
        "path_value: the path decomposition is defined for bias-free nets");
  const std::vector<Matrix>& value_net = arch.has_value_net() ? params.U : params.W;

  // First-layer inner product with x (all-ones for the PWC variant).
  double value;
  if (arch.kind == ModelKind::DlgnPwc)
    value = value_net[0].row(path[0]).sum();
  else
    value = value_net[0].row(path[0]).dot(x);
  // Edge weights along the path.
  for (std::size_t l = 1; l < path.size(); ++l)
    value *= value_net[l](path[l], path[l - 1]);
  // Head weights, one output per unit.
  return value_net.back().col(path.back()) * value;
}

Vector moe_sum(const Architecture& arch, const ModelParams& params,
               const Vector& x, std::size_t cap) {
  const std::vector<Path> paths =
      enumerate_paths(static_cast<int>(arch.hidden_width), arch.num_layers, cap);
  Vector total = Vector::Zero(arch.output_dim);

  std::vector<Vector> bits;
  if (arch.kind != ModelKind::Dln) bits = gate_bits(arch, params, x);
  for (const Path& path : paths) {
    bool active = true;
    for (std::size_t l = 0; l < path.size() && active; ++l)
      if (arch.kind != ModelKind::Dln && bits[l][path[l]] == 0.0) active = false;
    if (active) total += path_value(arch, params, x, path);
  }
  return total;
}

ActiveSet active_set(const Architecture& arch, const ModelParams& params,
                     const Vector& x, std::size_t cap) {
  const std::vector<Path> paths =
      enumerate_paths(static_cast<int>(arch.hidden_width), arch.num_layers, cap);
  ActiveSet set;
  set.bits.resize(paths.size(), 0);

  std::vector<Vector> bits;
  if (arch.kind != ModelKind::Dln) bits = gate_bits(arch, params, x);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    bool active = true;
    if (arch.kind != ModelKind::Dln)
      for (std::size_t l = 0; l < paths[p].size() && active; ++l)
        if (bits[l][paths[p][l]] == 0.0) active = false;
    if (active) {
      set.bits[p] = 1;
      ++set.count;
    }
  }
  return set;
}

std::size_t overlap_bruteforce(const Architecture& arch,
                               const ModelParams& params, const Vector& x,
                               const Vector& x_other, std::size_t cap) {
  const ActiveSet a = active_set(arch, params, x, cap);
  const ActiveSet b = active_set(arch, params, x_other, cap);
  std::size_t overlap = 0;
  for (std::size_t p = 0; p < a.bits.size(); ++p)
    if (a.bits[p] && b.bits[p]) ++overlap;
  return overlap;
}

std::vector<std::uint8_t> activation_pattern(const Architecture& arch,
                                             const ModelParams& params,
                                             const Vector& x) {
  const std::vector<Vector> bits = gate_bits(arch, params, x);
  std::vector<std::uint8_t> pattern;
  pattern.reserve(bits.size() * static_cast<std::size_t>(arch.hidden_width));
  for (const Vector& layer : bits)
    for (Index i = 0; i < layer.size(); ++i)
      pattern.push_back(layer[i] != 0.0 ? 1 : 0);
  return pattern;
}

std::size_t count_distinct_patterns(const Architecture& arch,
                                    const ModelParams& params,
                                    const Matrix& X) {
  if (arch.kind == ModelKind::Dln) return X.cols() > 0 ? 1 : 0;
  const GateTensor tensor = gate_tensor(arch, params, X);
  std::set<std::vector<std::uint8_t>> seen;
  for (Index a = 0; a < X.cols(); ++a) {
    std::vector<std::uint8_t> pattern;
    for (const Matrix& layer : tensor.layers)
      for (Index i = 0; i < layer.cols(); ++i)
        pattern.push_back(layer(a, i) != 0.0 ? 1 : 0);
    seen.insert(std::move(pattern));
  }
  return seen.size();
}

}  // namespace dlgn
