#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dlgn/forward.hpp"
#include "dlgn/gates.hpp"
#include "dlgn/hyperplanes.hpp"
#include "dlgn/paths.hpp"
#include "dlgn/train.hpp"
#include "test_util.hpp"

using namespace dlgn;
using namespace dlgn::testutil;

TEST_CASE("DLN forward equals the collapsed matrix product") {
  const Architecture arch = make_arch(ModelKind::Dln, 2, 2, 3);
  ModelParams params = init_params(arch, Rng(1));
  Vector x(2);
  x << 1.0, 2.0;
  const Vector y = forward_one(arch, params, x, GateMode::hard());
  const Vector direct = params.W[2] * (params.W[1] * (params.W[0] * x));
  CHECK(std::abs(y[0] - direct[0]) <= 1e-12 * (1.0 + std::abs(direct[0])));
}

TEST_CASE("DLGN hard gates are invariant to positive input scaling") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 3, 4, 4);
  const ModelParams params = init_params(arch, Rng(2));
  const Matrix x = random_inputs(3, 20, 3);
  const GateTensor g1 = gate_tensor(arch, params, x);
  const GateTensor g2 = gate_tensor(arch, params, 2.0 * x);
  for (std::size_t l = 0; l < g1.layers.size(); ++l)
    CHECK(g1.layers[l] == g2.layers[l]);
}

TEST_CASE("MoE equivalence: forward matches the path sum on all gated archs") {
  for (ModelKind kind : {ModelKind::Relu, ModelKind::Dlgn, ModelKind::DlgnPwc,
                         ModelKind::Dln}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Architecture arch = make_arch(kind, 2, 3, 4);
      const ModelParams params = init_params(arch, Rng(seed));
      const Matrix x = random_inputs(2, 5, seed + 100);
      const ForwardTrace trace = forward(arch, params, x, GateMode::hard());
      for (Index j = 0; j < x.cols(); ++j) {
        const Vector moe = moe_sum(arch, params, x.col(j));
        const double out = trace.output(0, j);
        CHECK(std::abs(out - moe[0]) <= 1e-9 * (1.0 + std::abs(out)));
      }
    }
  }
}

TEST_CASE("perfect fit has zero loss and ~zero gradients") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 3, 1, true);
  const ModelParams params = init_params(arch, Rng(4));
  Batch batch;
  batch.X = random_inputs(2, 8, 5);
  batch.Y = forward(arch, params, batch.X, GateMode::soft(10.0)).output;
  const auto [loss, grads] =
      loss_and_grads(arch, params, batch, GateMode::soft(10.0), LossKind::Mse);
  CHECK(loss == 0.0);
  for (const Matrix& g : grads.W) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  for (const Matrix& g : grads.U) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analytic gradients match finite differences (DLGN soft, MSE)") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 3, 1, true);
  const ModelParams params = init_params(arch, Rng(6));
  Batch batch;
  batch.X = random_inputs(2, 8, 7);
  batch.Y = random_inputs(1, 8, 8);
  const double err =
      grad_check(arch, params, batch, GateMode::soft(10.0), LossKind::Mse);
  CHECK(err < 1e-4);
}

TEST_CASE("analytic gradients match finite differences across the support matrix") {
  // Every architecture x loss x gate-mode combination supported for training.
  struct Combo {
    ModelKind kind;
    GateMode mode;
    bool freeze_gates;
  };
  const Combo combos[] = {
      {ModelKind::Relu, GateMode::hard(), false},
      {ModelKind::Relu, GateMode::soft(10.0), false},
      {ModelKind::Dlgn, GateMode::soft(10.0), false},
      {ModelKind::Dlgn, GateMode::hard(), true},
      {ModelKind::DlgnPwc, GateMode::soft(10.0), false},
      {ModelKind::DlgnPwc, GateMode::hard(), true},
      {ModelKind::Dln, GateMode::hard(), false},
  };
  for (const Combo& combo : combos) {
    for (LossKind loss : {LossKind::Mse, LossKind::SoftmaxCe}) {
      const Index out = loss == LossKind::Mse ? 1 : 3;
      const Architecture arch = make_arch(combo.kind, 2, 3, 3, out, true);
      std::uint64_t seed = 11;
      ModelParams params = init_params(arch, Rng(seed));
      params.freeze.gates_frozen = combo.freeze_gates;
      Batch batch;
      batch.X = random_inputs(2, 6, seed + 1);
      // keep hard-gate runs away from the threshold
      while (combo.mode.is_hard() && combo.kind != ModelKind::Dln &&
             preact_margin(arch, params, batch.X, combo.mode) < 1e-3) {
        ++seed;
        params = init_params(arch, Rng(seed));
        params.freeze.gates_frozen = combo.freeze_gates;
        batch.X = random_inputs(2, 6, seed + 1);
      }
      if (loss == LossKind::Mse)
        batch.Y = random_inputs(out, 6, seed + 2);
      else
        batch.labels = {0, 1, 2, 0, 1, 2};
      const double err = grad_check(arch, params, batch, combo.mode, loss);
      INFO("kind=", static_cast<int>(combo.kind), " loss=",
           static_cast<int>(loss));
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("training a DLGN with hard unfrozen gates is rejected") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 3, 3, 1, true);
  const ModelParams params = init_params(arch, Rng(1));
  Batch batch;
  batch.X = random_inputs(2, 4, 2);
  batch.Y = random_inputs(1, 4, 3);
  CHECK_THROWS_WITH_AS(
      loss_and_grads(arch, params, batch, GateMode::hard(), LossKind::Mse),
      "hard gates are non-differentiable; freeze gates or use SOFT",
      std::invalid_argument);
}

TEST_CASE("freezing zeroes the frozen group's gradients") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 3, 3, 1, true);
  ModelParams params = init_params(arch, Rng(9));
  params.freeze.gates_frozen = true;
  Batch batch;
  batch.X = random_inputs(2, 6, 10);
  batch.Y = random_inputs(1, 6, 11);
  const auto [loss, grads] =
      loss_and_grads(arch, params, batch, GateMode::soft(10.0), LossKind::Mse);
  for (const Matrix& g : grads.W) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  for (const Vector& g : grads.b) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  bool some_value_grad = false;
  for (const Matrix& g : grads.U)
    if (g.cwiseAbs().maxCoeff() > 0.0) some_value_grad = true;
  CHECK(some_value_grad);
}

TEST_CASE("training with a frozen group leaves it bit-identical") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 3, 1, true);
  Batch batch;
  batch.X = random_inputs(2, 16, 20);
  batch.Y = random_inputs(1, 16, 21);

  TrainConfig tc;
  tc.epochs = 3;
  tc.mode = GateMode::soft(10.0);
  tc.seed = 5;

  SUBCASE("gates frozen") {
    ModelParams params = init_params(arch, Rng(22));
    params.freeze.gates_frozen = true;
    tc.mode = GateMode::hard();
    const ModelParams before = params;
    const TrainResult result = train(arch, params, batch, tc);
    for (std::size_t l = 0; l < before.W.size(); ++l)
      CHECK(result.params.W[l] == before.W[l]);
    bool moved = false;
    for (std::size_t l = 0; l < before.U.size(); ++l)
      if (result.params.U[l] != before.U[l]) moved = true;
    CHECK(moved);
  }
  SUBCASE("values frozen") {
    ModelParams params = init_params(arch, Rng(23));
    params.freeze.values_frozen = true;
    const ModelParams before = params;
    const TrainResult result = train(arch, params, batch, tc);
    for (std::size_t l = 0; l < before.U.size(); ++l)
      CHECK(result.params.U[l] == before.U[l]);
    bool moved = false;
    for (std::size_t l = 0; l < before.W.size(); ++l)
      if (result.params.W[l] != before.W[l]) moved = true;
    CHECK(moved);
  }
}

TEST_CASE("DLGN-PWC is exactly invariant to positive input scaling") {
  const Architecture arch = make_arch(ModelKind::DlgnPwc, 3, 4, 4);
  const ModelParams params = init_params(arch, Rng(30));
  const Matrix x = random_inputs(3, 100, 31);
  const ForwardTrace base = forward(arch, params, x, GateMode::hard());
  for (double c : {0.5, 2.0, 10.0}) {
    const ForwardTrace scaled = forward(arch, params, c * x, GateMode::hard());
    CHECK(scaled.output == base.output);  // bitwise
  }
}

TEST_CASE("soft gating approaches hard gating as beta grows") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 3, 3);
  ModelParams params = init_params(arch, Rng(40));
  // keep only inputs whose pre-activations clear the threshold by 0.1
  Matrix kept(2, 50);
  Index kept_count = 0;
  Rng rng(41);
  while (kept_count < 50) {
    Vector x(2);
    x[0] = rng.gaussian();
    x[1] = rng.gaussian();
    if (preact_margin(arch, params, x, GateMode::hard()) >= 0.1)
      kept.col(kept_count++) = x;
  }
  const Matrix hard_out = forward(arch, params, kept, GateMode::hard()).output;
  double previous = 1e300;
  for (double beta : {1.0, 10.0, 100.0, 1000.0}) {
    const Matrix soft_out =
        forward(arch, params, kept, GateMode::soft(beta)).output;
    const double err = (soft_out - hard_out).cwiseAbs().maxCoeff();
    CHECK(err <= previous);
    previous = err;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("train: DLN fits a linear target") {
  const Architecture arch = make_arch(ModelKind::Dln, 2, 4, 3, 1, false);
  ModelParams params = init_params(arch, Rng(50));
  Batch batch;
  batch.X = random_inputs(2, 64, 51);
  Vector a(2);
  a << 0.7, -1.3;
  batch.Y = (a.transpose() * batch.X).eval();

  TrainConfig tc;
  tc.epochs = 500;
  tc.mode = GateMode::hard();
  tc.adam.lr = 1e-2;
  tc.seed = 52;
  const TrainResult result = train(arch, params, batch, tc);
  CHECK(result.history.back().mse < 1e-4);
}

TEST_CASE("train: divergence raises an error naming the epoch") {
  const Architecture arch = make_arch(ModelKind::Dln, 1, 2, 3, 1, false);
  ModelParams params = init_params(arch, Rng(60));
  Batch batch;
  batch.X = 1e150 * random_inputs(1, 4, 61);
  batch.Y = 1e150 * random_inputs(1, 4, 62);
  TrainConfig tc;
  tc.epochs = 50;
  tc.mode = GateMode::hard();
  tc.adam.lr = 1e300;
  CHECK_THROWS_AS(train(arch, params, batch, tc), std::runtime_error);
}

TEST_CASE("gate_tensor: half-space membership for a single neuron row") {
  Architecture arch = make_arch(ModelKind::Dlgn, 2, 1, 2);
  ModelParams params = init_params(arch, Rng(70));
  params.W[0] << 1.0, 0.0;
  Matrix x(2, 2);
  x << 1.0, -1.0, 0.0, 0.0;
  const GateTensor gates = gate_tensor(arch, params, x);
  CHECK(gates.layers[0](0, 0) == 1.0);
  CHECK(gates.layers[0](1, 0) == 0.0);
}

TEST_CASE("gate_tensor: positive weights and ones input keep everything on") {
  Architecture arch = make_arch(ModelKind::Dlgn, 3, 4, 4);
  ModelParams params = init_params(arch, Rng(71));
  for (Matrix& w : params.W) w = w.cwiseAbs();
  const Matrix x = Matrix::Ones(3, 1);
  const GateTensor gates = gate_tensor(arch, params, x);
  for (const Matrix& layer : gates.layers) CHECK(layer.minCoeff() == 1.0);
}

TEST_CASE("gate_tensor: bits agree with forward-trace pre-activation signs") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 4, 1, true);
  const ModelParams params = init_params(arch, Rng(72));
  const Matrix x = random_inputs(2, 10, 73);
  const GateTensor gates = gate_tensor(arch, params, x);
  const ForwardTrace trace = forward(arch, params, x, GateMode::hard());
  for (std::size_t l = 0; l < gates.layers.size(); ++l)
    for (Index a = 0; a < x.cols(); ++a)
      for (Index i = 0; i < arch.hidden_width; ++i)
        CHECK(gates.layers[l](a, i) ==
              (trace.preact[l](i, a) >= 0.0 ? 1.0 : 0.0));
  CHECK_THROWS_AS(
      gate_tensor(make_arch(ModelKind::Dln, 2, 4, 4), params, x),
      std::invalid_argument);
}

TEST_CASE("dlgn_hyperplanes: layer 1 is exactly (W_1, b_1)") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 3, 2, 1, true);
  ModelParams params = init_params(arch, Rng(80));
  params.b[0] << 0.1, -0.2, 0.3;
  const auto planes = dlgn_hyperplanes(arch, params);
  REQUIRE(planes.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(planes[static_cast<std::size_t>(i)].normal ==
          params.W[0].row(i).transpose());
    CHECK(planes[static_cast<std::size_t>(i)].offset == params.b[0][i]);
  }
}

TEST_CASE("dlgn_hyperplanes: affine forms reproduce eta exactly") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 4, 1, true);
  const ModelParams params = init_params(arch, Rng(81));
  const Matrix x = random_inputs(2, 6, 82);
  const ForwardTrace trace = forward(arch, params, x, GateMode::hard());
  const auto planes = dlgn_hyperplanes(arch, params);
  for (const Hyperplane& p : planes)
    for (Index a = 0; a < x.cols(); ++a) {
      const double eta = trace.preact[static_cast<std::size_t>(p.layer - 1)](
          p.neuron, a);
      const double affine = p.normal.dot(x.col(a)) + p.offset;
      CHECK(std::abs(eta - affine) < 1e-12 * (1.0 + std::abs(eta)));
    }
}

TEST_CASE("dlgn_hyperplanes: bias-free planes pass through the origin") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 3, 4);
  const ModelParams params = init_params(arch, Rng(83));
  for (const Hyperplane& p : dlgn_hyperplanes(arch, params))
    CHECK(p.offset == 0.0);
  const Architecture relu = make_arch(ModelKind::Relu, 2, 3, 4);
  CHECK_THROWS_AS(dlgn_hyperplanes(relu, init_params(relu, Rng(84))),
                  std::invalid_argument);
}

TEST_CASE("checkpoint round-trip restores architecture and weights") {
  const Architecture arch = make_arch(ModelKind::DlgnPwc, 3, 4, 3, 2, true);
  const ModelParams params = init_params(arch, Rng(90));
  const std::string path =
      (std::filesystem::temp_directory_path() / "dlgn_test.ckpt").string();
  save_checkpoint(arch, params, path);
  const auto [arch2, params2] = load_checkpoint(path);
  CHECK(arch2.kind == arch.kind);
  CHECK(arch2.input_dim == arch.input_dim);
  CHECK(arch2.hidden_width == arch.hidden_width);
  CHECK(arch2.num_layers == arch.num_layers);
  CHECK(arch2.output_dim == arch.output_dim);
  CHECK(arch2.use_bias == arch.use_bias);
  for (std::size_t l = 0; l < params.W.size(); ++l) {
    CHECK(params2.W[l] == params.W[l]);
    CHECK(params2.U[l] == params.U[l]);
    CHECK(params2.b[l] == params.b[l]);
    CHECK(params2.c[l] == params.c[l]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("init_params is deterministic per seed") {
  const Architecture arch = make_arch(ModelKind::Dlgn, 2, 4, 3, 1, true);
  const ModelParams a = init_params(arch, Rng(7));
  const ModelParams b = init_params(arch, Rng(7));
  for (std::size_t l = 0; l < a.W.size(); ++l) {
    CHECK(a.W[l] == b.W[l]);
    CHECK(a.U[l] == b.U[l]);
  }
  const ModelParams c = init_params(arch, Rng(8));
  CHECK(a.W[0] != c.W[0]);
}

TEST_CASE("forward rejects dimension mismatches") {
  const Architecture arch = make_arch(ModelKind::Relu, 3, 2, 3);
  const ModelParams params = init_params(arch, Rng(95));
  CHECK_THROWS_AS(forward(arch, params, Matrix::Zero(2, 1), GateMode::hard()),
                  std::invalid_argument);
}
