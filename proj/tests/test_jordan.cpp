#include <doctest.h>

#include <cmath>

#include "pirpnn/rng.hpp"
#include "pirpnn/stepper.hpp"

using namespace pirpnn;

namespace {

StepConfig config(double h, int features = 6) {
  StepConfig c;
  c.m_colloc = 1;
  c.n_features = features;
  c.h = h;
  c.delta = 0.0;
  c.seed = 5;
  return c;
}

// The basis jordan_block_step uses for component l of window 0.
RbfBasis component_basis(const StepConfig& c, double lambda, int l) {
  const int n = c.features();
  return sample_basis(n, c.alpha.resolve(std::abs(lambda), c.h, n), 0.0, c.h, rng::derive(c.window_seed(0), l));
}

}  // namespace

TEST_CASE("transition is upper triangular with chain products above the diagonal") {
  for (double h : {0.05, 0.5, 3.0}) {
    const double lambda = -1.7;
    const int m = 4;
    const JordanStep js = jordan_block_step(lambda, m, config(h), Eigen::VectorXd::LinSpaced(m, 1.0, -1.0));
    const Eigen::VectorXd& lam = js.lambdas;
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        if (c < r) {
          CHECK(js.transition(r, c) == 0.0);
          continue;
        }
        double expect = 1.0 + lambda * lam[c];
        for (int j = r; j < c; ++j) expect *= lam[j];
        CHECK(js.transition(r, c) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("weights satisfy the end-point collocation equations with minimum norm") {
  const double lambda = -2.0;
  const double h = 0.4;
  const int m = 3;
  const StepConfig c = config(h);
  const Eigen::Vector3d y(1.0, 0.5, -0.25);
  const JordanStep js = jordan_block_step(lambda, m, c, y);
  CHECK((js.transition * y - js.y_next).norm() < 1e-14);
  for (int l = 0; l < m; ++l) {
    const RbfBasis b = component_basis(c, lambda, l);
    const Eigen::VectorXd q = eval_features(b, h);
    const Eigen::VectorXd dq = eval_feature_derivs(b, h);
    const double derivative = js.weights[l].dot(q + h * dq);
    const double coupling = l + 1 < m ? js.y_next[l + 1] : 0.0;
    CHECK(std::abs(derivative - lambda * js.y_next[l] - coupling) < 1e-12);
    const Eigen::VectorXd k = q + h * dq - lambda * h * q;
    CHECK((js.weights[l] - js.weights[l].dot(k) / k.squaredNorm() * k).norm() < 1e-12);
    CHECK(js.y_next[l] == doctest::Approx(y[l] + h * js.weights[l].dot(q)));
  }
}

TEST_CASE("block of size one is the single-collocation scalar scheme") {
  const double lambda = -3.0;
  const StepConfig c = config(0.7);
  const JordanStep js = jordan_block_step(lambda, 1, c, Eigen::VectorXd::Ones(1));
  const StepOperator op = build_scalar_step(lambda, c, component_basis(c, lambda, 0));
  CHECK(js.transition(0, 0) == doctest::Approx(op.endpoint().real()).epsilon(1e-12));
  CHECK(js.transition(0, 0) == doctest::Approx(1.0 + lambda * js.lambdas[0]).epsilon(1e-14));
}

TEST_CASE("small steps approach the identity") {
  double prev = INFINITY;
  for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const JordanStep js = jordan_block_step(-2.0, 3, config(h), Eigen::VectorXd::Ones(3));
    const double dist = (js.transition - Eigen::MatrixXd::Identity(3, 3)).norm();
    CHECK(dist < prev);
    prev = dist;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("iterated Jordan steps decay") {
  const StepConfig c = config(0.5);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  for (int i = 0; i < 100; ++i) {
    const JordanStep js = jordan_block_step(-2.0, 3, c, y, 0.5 * i, i);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(1.0 - 2.0 * js.lambdas[j]) < 1.0);
    y = js.y_next;
  }
  CHECK(y.norm() < 1e-6);
}

TEST_CASE("Jordan step validates its inputs") {
  CHECK_THROWS(jordan_block_step(-1.0, 0, config(0.1), Eigen::VectorXd()));
  CHECK_THROWS(jordan_block_step(-1.0, 3, config(0.1), Eigen::VectorXd::Ones(2)));
}
