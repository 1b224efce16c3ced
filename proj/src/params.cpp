#include "dlgn/params.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "dlgn/init.hpp"

namespace dlgn {

namespace {

std::vector<Matrix> init_weight_stack(const Architecture& arch, Rng& rng) {
  std::vector<Matrix> weights;
  weights.reserve(static_cast<std::size_t>(arch.num_layers));
  for (int l = 1; l <= arch.num_layers; ++l)
    weights.push_back(he_gaussian_init(arch.layer_out(l), arch.layer_in(l), rng));
  return weights;
}

std::vector<Vector> init_bias_stack(const Architecture& arch) {
  std::vector<Vector> biases;
  if (!arch.use_bias) return biases;
  biases.reserve(static_cast<std::size_t>(arch.num_layers));
  for (int l = 1; l <= arch.num_layers; ++l)
    biases.push_back(zero_init(arch.layer_out(l)));
  return biases;
}

void check_stack(const Architecture& arch, const std::vector<Matrix>& weights,
                 const std::vector<Vector>& biases, const char* name) {
  if (weights.size() != static_cast<std::size_t>(arch.num_layers))
    throw std::invalid_argument(std::string("ModelParams: wrong layer count in ") +
                                name);
  for (int l = 1; l <= arch.num_layers; ++l) {
    const Matrix& w = weights[static_cast<std::size_t>(l - 1)];
    if (w.rows() != arch.layer_out(l) || w.cols() != arch.layer_in(l))
      throw std::invalid_argument(std::string("ModelParams: bad shape in ") +
                                  name + " at layer " + std::to_string(l));
  }
  if (arch.use_bias) {
    if (biases.size() != static_cast<std::size_t>(arch.num_layers))
      throw std::invalid_argument(
          std::string("ModelParams: wrong bias count in ") + name);
    for (int l = 1; l <= arch.num_layers; ++l)
      if (biases[static_cast<std::size_t>(l - 1)].size() != arch.layer_out(l))
        throw std::invalid_argument(std::string("ModelParams: bad bias size in ") +
                                    name + " at layer " + std::to_string(l));
  } else if (!biases.empty()) {
    throw std::invalid_argument(
        std::string("ModelParams: biases present in bias-free net (") + name +
        ")");
  }
}

}  // namespace

ModelParams init_params(const Architecture& arch, const Rng& rng) {
  arch.validate();
  ModelParams params;
  Rng w_stream = rng.split(0);
  params.W = init_weight_stack(arch, w_stream);
  params.b = init_bias_stack(arch);
  if (arch.has_value_net()) {
    Rng u_stream = rng.split(1);
    params.U = init_weight_stack(arch, u_stream);
    params.c = init_bias_stack(arch);
  }
  return params;
}

void check_shapes(const Architecture& arch, const ModelParams& params) {
  arch.validate();
  check_stack(arch, params.W, params.b, "W");
  if (arch.has_value_net()) {
    check_stack(arch, params.U, params.c, "U");
  } else if (!params.U.empty() || !params.c.empty()) {
    throw std::invalid_argument(
        "ModelParams: value network present for a non-DLGN architecture");
  }
}

namespace {

Index group_size(const std::vector<Matrix>& ws, const std::vector<Vector>& bs) {
  Index total = 0;
  for (const Matrix& w : ws) total += w.size();
  for (const Vector& v : bs) total += v.size();
  return total;
}

void flatten_stack(const std::vector<Matrix>& ws, const std::vector<Vector>& bs,
                   Vector& out, Index& offset) {
  for (const Matrix& w : ws) {
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) out[offset++] = w(i, j);
  }
  for (const Vector& v : bs)
    for (Index i = 0; i < v.size(); ++i) out[offset++] = v[i];
}

void unflatten_stack(std::vector<Matrix>& ws, std::vector<Vector>& bs,
                     const Vector& flat, Index& offset) {
  for (Matrix& w : ws) {
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = flat[offset++];
  }
  for (Vector& v : bs)
    for (Index i = 0; i < v.size(); ++i) v[i] = flat[offset++];
}

}  // namespace

Vector flatten_trainable(const Architecture& arch, const ModelParams& params) {
  check_shapes(arch, params);
  Index total = 0;
  if (!params.freeze.gates_frozen) total += group_size(params.W, params.b);
  if (arch.has_value_net() && !params.freeze.values_frozen)
    total += group_size(params.U, params.c);
  Vector flat(total);
  Index offset = 0;
  if (!params.freeze.gates_frozen) flatten_stack(params.W, params.b, flat, offset);
  if (arch.has_value_net() && !params.freeze.values_frozen)
    flatten_stack(params.U, params.c, flat, offset);
  return flat;
}

void set_trainable(const Architecture& arch, ModelParams& params,
                   const Vector& flat) {
  check_shapes(arch, params);
  Index offset = 0;
  if (!params.freeze.gates_frozen) unflatten_stack(params.W, params.b, flat, offset);
  if (arch.has_value_net() && !params.freeze.values_frozen)
    unflatten_stack(params.U, params.c, flat, offset);
  if (offset != flat.size())
    throw std::invalid_argument("set_trainable: flat vector size mismatch");
}

namespace {

constexpr char kCheckpointMagic[8] = {'D', 'L', 'G', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_matrix(std::ofstream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

Matrix read_matrix(std::ifstream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      m(i, j) = v;
    }
  return m;
}

}  // namespace

void save_checkpoint(const Architecture& arch, const ModelParams& params,
                     const std::string& path) {
  check_shapes(arch, params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_u32(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(arch.kind));
  write_u32(out, static_cast<std::uint32_t>(arch.input_dim));
  write_u32(out, static_cast<std::uint32_t>(arch.hidden_width));
  write_u32(out, static_cast<std::uint32_t>(arch.num_layers));
  write_u32(out, static_cast<std::uint32_t>(arch.output_dim));
  write_u32(out, arch.use_bias ? 1u : 0u);
  for (int l = 0; l < arch.num_layers; ++l) {
    write_matrix(out, params.W[static_cast<std::size_t>(l)]);
    if (arch.use_bias) write_matrix(out, params.b[static_cast<std::size_t>(l)]);
  }
  if (arch.has_value_net()) {
    for (int l = 0; l < arch.num_layers; ++l) {
      write_matrix(out, params.U[static_cast<std::size_t>(l)]);
      if (arch.use_bias) write_matrix(out, params.c[static_cast<std::size_t>(l)]);
    }
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

std::pair<Architecture, ModelParams> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  if (read_u32(in) != kCheckpointVersion)
    throw std::runtime_error("load_checkpoint: unsupported version in " + path);
  Architecture arch;
  arch.kind = static_cast<ModelKind>(read_u32(in));
  arch.input_dim = static_cast<Index>(read_u32(in));
  arch.hidden_width = static_cast<Index>(read_u32(in));
  arch.num_layers = static_cast<int>(read_u32(in));
  arch.output_dim = static_cast<Index>(read_u32(in));
  arch.use_bias = read_u32(in) != 0;
  arch.validate();

  ModelParams params;
  for (int l = 1; l <= arch.num_layers; ++l) {
    params.W.push_back(read_matrix(in, arch.layer_out(l), arch.layer_in(l)));
    if (arch.use_bias)
      params.b.push_back(read_matrix(in, arch.layer_out(l), 1).col(0));
  }
  if (arch.has_value_net()) {
    for (int l = 1; l <= arch.num_layers; ++l) {
      params.U.push_back(read_matrix(in, arch.layer_out(l), arch.layer_in(l)));
      if (arch.use_bias)
        params.c.push_back(read_matrix(in, arch.layer_out(l), 1).col(0));
    }
  }
  if (!in) throw std::runtime_error("load_checkpoint: truncated file " + path);
  return {arch, params};
}

}  // namespace dlgn
