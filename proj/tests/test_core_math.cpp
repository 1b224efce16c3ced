#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlgn/adam.hpp"
#include "dlgn/finite_diff.hpp"
#include "dlgn/init.hpp"
#include "dlgn/rng.hpp"
#include "dlgn/types.hpp"

using namespace dlgn;

TEST_CASE("rng: identical seed gives identical stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(43);
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("rng: split streams are independent of parent consumption") {
  Rng parent(7);
  Rng child_before = parent.split(3);
  parent.next_u64();
  Rng child_after = parent.split(3);
  CHECK(child_before.next_u64() == child_after.next_u64());
  Rng other = parent.split(4);
  CHECK(parent.split(3).next_u64() != other.next_u64());
}

TEST_CASE("rng: uniform in [0,1), gaussian moments roughly standard") {
  Rng rng(123);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("he_gaussian_init: determinism and single-sample law") {
  Rng a(0), b(0);
  const Matrix m1 = he_gaussian_init(1, 1, a);
  const Matrix m2 = he_gaussian_init(1, 1, b);
  CHECK(m1(0, 0) == m2(0, 0));  // bit-identical
  CHECK(std::isfinite(m1(0, 0)));
}

TEST_CASE("he_gaussian_init: empirical variance near 2/cols") {
  Rng rng(7);
  const Matrix w = he_gaussian_init(1000, 4, rng);
  const double var = w.array().square().mean();
  CHECK(var == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("he_gaussian_init: shape and finiteness") {
  Rng rng(99);
  const Matrix w = he_gaussian_init(2, 3, rng);
  CHECK(w.rows() == 2);
  CHECK(w.cols() == 3);
  CHECK(all_finite(w));
  CHECK_THROWS_AS(he_gaussian_init(0, 3, rng), std::invalid_argument);
}

TEST_CASE("adam_step: first step moves by ~lr") {
  Matrix theta = Matrix::Zero(1, 1);
  Matrix grad = Matrix::Ones(1, 1);
  AdamState<Matrix> state;
  AdamConfig cfg;  // lr=1e-3, betas 0.9/0.999, eps 1e-8
  adam_step(theta, grad, state, cfg);
  CHECK(std::abs(theta(0, 0) + 1e-3) < 1e-9);
  CHECK(state.step_count == 1);

  adam_step(theta, grad, state, cfg);
  CHECK(std::abs(theta(0, 0) + 2e-3) < 1e-6);
  CHECK(state.step_count == 2);
}

TEST_CASE("adam_step: zero gradient leaves parameters untouched") {
  Rng rng(5);
  Matrix theta = he_gaussian_init(3, 4, rng);
  const Matrix before = theta;
  Matrix grad = Matrix::Zero(3, 4);
  AdamState<Matrix> state;
  AdamConfig cfg;
  for (int i = 0; i < 10; ++i) adam_step(theta, grad, state, cfg);
  CHECK(theta == before);  // bitwise
}

TEST_CASE("adam_step: shape mismatch throws, second moment nonnegative") {
  Matrix theta = Matrix::Zero(2, 2);
  Matrix bad = Matrix::Zero(2, 3);
  AdamState<Matrix> state;
  AdamConfig cfg;
  CHECK_THROWS_AS(adam_step(theta, bad, state, cfg), std::invalid_argument);

  Rng rng(11);
  Matrix grad = he_gaussian_init(2, 2, rng);
  adam_step(theta, grad, state, cfg);
  CHECK((state.second_moment.array() >= 0.0).all());
}

TEST_CASE("adam_step: works on vectors") {
  Vector theta = Vector::Zero(3);
  Vector grad = Vector::Ones(3);
  AdamState<Vector> state;
  AdamConfig cfg;
  adam_step(theta, grad, state, cfg);
  CHECK(std::abs(theta[0] + 1e-3) < 1e-9);
}

TEST_CASE("finite_diff_grad: quadratic") {
  auto loss = [](const Vector& t) { return t[0] * t[0]; };
  Vector theta(1);
  theta[0] = 3.0;
  const Vector g = finite_diff_grad(loss, theta, 1e-5);
  CHECK(std::abs(g[0] - 6.0) < 1e-6);
}

TEST_CASE("finite_diff_grad: constant loss gives zero vector") {
  auto loss = [](const Vector&) { return 4.2; };
  Vector theta = Vector::Ones(5);
  const Vector g = finite_diff_grad(loss, theta, 1e-5);
  CHECK(g.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("finite_diff_grad: half norm squared recovers theta") {
  Rng rng(3);
  Vector theta(8);
  for (int i = 0; i < 8; ++i) theta[i] = rng.gaussian();
  auto loss = [](const Vector& t) { return 0.5 * t.squaredNorm(); };
  const Vector g = finite_diff_grad(loss, theta, 1e-5);
  CHECK((g - theta).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(finite_diff_grad(loss, theta, 0.0), std::invalid_argument);
}
