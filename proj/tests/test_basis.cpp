#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "pirpnn/basis.hpp"
#include "pirpnn/errors.hpp"
#include "pirpnn/rng.hpp"

using namespace pirpnn;
using doctest::Approx;

TEST_CASE("centers sit at j/N of the window") {
  const RbfBasis b = sample_basis(3, 1.0, 0.0, 1.0, 42);
  CHECK(b.center_fractions[0] == Approx(1.0 / 3.0));
  CHECK(b.center_fractions[1] == Approx(2.0 / 3.0));
  CHECK(b.center_fractions[2] == 1.0);
  const RbfBasis shifted = sample_basis(4, 1.0, 2.0, 0.5, 1);
  CHECK(shifted.center(3) == Approx(2.5));
  CHECK(shifted.center(0) == Approx(2.125));
}

TEST_CASE("thetas are a pure function of the seed") {
  const RbfBasis a = sample_basis(50, 1.0, 0.0, 1.0, 7);
  const RbfBasis b = sample_basis(50, 1.0, 0.0, 1.0, 7);
  const RbfBasis c = sample_basis(50, 1.0, 0.0, 1.0, 8);
  CHECK(a.thetas == b.thetas);
  CHECK(a.thetas != c.thetas);
  for (double t : a.thetas) {
    CHECK(t >= 0.0);
    CHECK(t < 1.0);
  }
}

TEST_CASE("uniform thetas have mean one half") {
  const RbfBasis b = sample_basis(10000, 1.0, 0.0, 1.0, 123);
  double mean = 0.0;
  for (double t : b.thetas) mean += t;
  mean /= 10000.0;
  CHECK(mean >= 0.48);
  CHECK(mean <= 0.52);
}

TEST_CASE("sample_basis rejects bad arguments") {
  CHECK_THROWS_AS(sample_basis(0, 1.0, 0.0, 1.0, 0), ArgumentError);
  CHECK_THROWS_AS(sample_basis(3, 1.0, 0.0, 0.0, 0), ArgumentError);
  CHECK_THROWS_AS(sample_basis(3, 1.0, 0.0, -1.0, 0), ArgumentError);
}

TEST_CASE("feature values") {
  RbfBasis b = sample_basis(5, 2.0, 0.0, 1.0, 3);
  for (int j = 0; j < 5; ++j) CHECK(eval_features(b, b.center(j))[j] == 1.0);

  const RbfBasis flat = sample_basis(5, 0.0, 0.0, 1.0, 3);
  for (double t : {-3.0, 0.2, 7.0}) CHECK(eval_features(flat, t).isOnes());
  CHECK(eval_feature_derivs(flat, 0.4).isZero());

  RbfBasis one;
  one.n_features = 1;
  one.alpha_u = 1.0;
  one.thetas = {1.0};
  one.center_fractions = {0.0};
  one.window_start = 0.0;
  one.window_len = 1.0;
  CHECK(eval_features(one, 1.0)[0] == Approx(0.367879441171).epsilon(1e-10));
}

TEST_CASE("features stay in (0, 1]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RbfBasis b = sample_basis(30, 5.0 * rng::uniform01(seed, 99), 0.0, 1.0, seed);
    for (double t : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
      const Eigen::VectorXd phi = eval_features(b, t);
      CHECK(phi.minCoeff() > 0.0);
      CHECK(phi.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("derivatives match central differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RbfBasis b = sample_basis(12, 0.5 + 3.0 * rng::uniform01(seed, 5), -0.3, 0.8, seed);
    const double t = -0.5 + 1.5 * rng::uniform01(seed, 6);
    const Eigen::VectorXd d = eval_feature_derivs(b, t);
    for (int j = 0; j < 12; ++j) {
      const double fd = oracle::central_diff([&](double s) { return eval_features(b, s)[j]; }, t, 1e-6);
      CHECK(std::abs(d[j] - fd) <= 1e-6 * std::max(1.0, std::abs(d[j])));
    }
    for (int j = 0; j < 12; ++j) CHECK(eval_feature_derivs(b, b.center(j))[j] == 0.0);
  }
}

TEST_CASE("collocation grid fractions") {
  const CollocationGrid g = CollocationGrid::equispaced(4, 1.0, 0.5);
  CHECK(g.fractions == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  CHECK(g.point(3) == 1.5);
}

TEST_CASE("psi at alpha zero is 1 - lambda h zeta") {
  const double h = 0.4;
  const RbfBasis b = sample_basis(6, 0.0, 0.0, h, 11);
  const CollocationGrid g = CollocationGrid::equispaced(3, 0.0, h);
  const std::complex<double> lambda(-2.5, 0.0);
  const Eigen::MatrixXcd psi = assemble_psi(b, g, lambda);
  REQUIRE(psi.rows() == 6);
  REQUIRE(psi.cols() == 3);
  for (int j = 0; j < 6; ++j) {
    for (int i = 0; i < 3; ++i) {
      CHECK(psi(j, i).real() == Approx(1.0 - lambda.real() * h * g.fractions[i]));
      CHECK(psi(j, i).imag() == 0.0);
    }
  }
  CHECK(assemble_psi(b, g, 0.0).real().isOnes());
}

TEST_CASE("psi entries match direct evaluation") {
  const double h = 0.7;
  const RbfBasis b = sample_basis(4, 1.3, 0.2, h, 5);
  const CollocationGrid g = CollocationGrid::equispaced(2, 0.2, h);
  const std::complex<double> lambda(-1.5, 0.8);
  const Eigen::MatrixXcd psi = assemble_psi(b, g, lambda);
  for (int i = 0; i < 2; ++i) {
    const double c = g.point(i);
    const double s = c - 0.2;
    const Eigen::VectorXd phi = eval_features(b, c);
    const Eigen::VectorXd dphi = eval_feature_derivs(b, c);
    for (int j = 0; j < 4; ++j) {
      const std::complex<double> expect = phi[j] + s * dphi[j] - lambda * s * phi[j];
      CHECK(std::abs(psi(j, i) - expect) < 1e-14);
    }
  }
}

TEST_CASE("psi is affine in lambda") {
  const double h = 0.3;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RbfBasis b = sample_basis(7, 2.0, 0.0, h, seed);
    const CollocationGrid g = CollocationGrid::equispaced(4, 0.0, h);
    const std::complex<double> lambda(-3.0 + seed, 1.0 - seed);
    const Eigen::MatrixXcd diff = assemble_psi(b, g, lambda) - assemble_psi(b, g, 0.0);
    for (int i = 0; i < 4; ++i) {
      const Eigen::VectorXd phi = eval_features(b, g.point(i));
      for (int j = 0; j < 7; ++j) CHECK(std::abs(diff(j, i) + lambda * h * g.fractions[i] * phi[j]) < 1e-13);
    }
  }
}

TEST_CASE("psi rejects mismatched windows") {
  const RbfBasis b = sample_basis(4, 1.0, 0.0, 1.0, 0);
  CHECK_THROWS_AS(assemble_psi(b, CollocationGrid::equispaced(2, 0.0, 0.5), -1.0), ArgumentError);
  CHECK_THROWS_AS(assemble_psi(b, CollocationGrid::equispaced(2, 0.1, 1.0), -1.0), ArgumentError);
}

TEST_CASE("default alpha_u") {
  CHECK(default_alpha_u(1.0, 1.0, 9) == Approx(1.0 / 12.0));
  CHECK(default_alpha_u(0.0, 0.3, 5) == 0.0);
  const double eps = default_alpha_u(1000.0, 1.0, 30);
  CHECK(eps == Approx(1000.0 / (30.0 + 1000.0 + 1e6 + 1e9)).epsilon(1e-12));
  CHECK(eps == Approx(9.99e-7).epsilon(1e-3));
  CHECK_THROWS_AS(default_alpha_u(1.0, 0.0, 3), ArgumentError);
}

TEST_CASE("default scale keeps eps below min(1, |lambda| h / N)") {
  for (int n : {1, 3, 9, 30, 150}) {
    for (double x = 0.0; x < 1e4; x = x * 1.7 + 0.01) {
      for (double h : {1e-3, 0.1, 1.0, 10.0}) {
        const double eps = default_alpha_u(x / h, h, n) * h * h;
        CHECK(eps <= std::min(1.0, x / n) * (1.0 + 1e-12));
      }
    }
  }
}
