#pragma once

#include <stdexcept>
#include <string>

#include "dlgn/types.hpp"

namespace dlgn {

enum class ModelKind { Relu, Dlgn, DlgnPwc, Dln };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Gate nonlinearity: hard indicator 1(eta >= 0), or the differentiable
/// surrogate sigmoid(beta * eta) used during training.
struct GateMode {
  enum class Kind { Hard, Soft };
  Kind kind = Kind::Hard;
  double beta = 10.0;

  static GateMode hard() { return {Kind::Hard, 0.0}; }
  static GateMode soft(double beta = 10.0) {
    if (!(beta > 0.0)) throw std::invalid_argument("GateMode: beta must be > 0");
    return {Kind::Soft, beta};
  }
  bool is_hard() const { return kind == Kind::Hard; }
  bool is_soft() const { return kind == Kind::Soft; }
};

/// Feed-forward layout shared by all four model kinds: layers 1..L-1 are
/// hidden layers of width m, layer L is the linear head.
struct Architecture {
  ModelKind kind = ModelKind::Relu;
  Index input_dim = 1;
  Index hidden_width = 1;
  int num_layers = 2;
  Index output_dim = 1;
  bool use_bias = true;

  int hidden_layers() const { return num_layers - 1; }
  bool has_gates() const { return kind != ModelKind::Dln; }
  bool has_value_net() const {
    return kind == ModelKind::Dlgn || kind == ModelKind::DlgnPwc;
  }

  /// Fan-in of layer l (1-based).
  Index layer_in(int l) const { return l == 1 ? input_dim : hidden_width; }
  /// Fan-out of layer l (1-based).
  Index layer_out(int l) const {
    return l == num_layers ? output_dim : hidden_width;
  }

  void validate() const {
    if (input_dim < 1 || hidden_width < 1 || num_layers < 2 || output_dim < 1)
      throw std::invalid_argument(
          "Architecture: require d >= 1, m >= 1, L >= 2, out >= 1");
  }
};

}  // namespace dlgn
