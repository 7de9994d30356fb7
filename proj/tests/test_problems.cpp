#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "pirpnn/errors.hpp"
#include "pirpnn/problems.hpp"

using namespace pirpnn;

TEST_CASE("dahlquist reference") {
  const ProblemInstance p = dahlquist(-2.0, 3.0);
  CHECK(p.reference(0.0)[0] == 3.0);
  CHECK(p.reference(0.5)[0] == doctest::Approx(3.0 * std::exp(-1.0)));
  CHECK(p.reference_is_exact);
}

TEST_CASE("example 1 eigenvalues and closed form") {
  const ProblemInstance p = example1_nonnormal();
  Eigen::EigenSolver<Eigen::MatrixXd> es(p.linear.matrix_a);
  std::vector<double> ev{es.eigenvalues()[0].real(), es.eigenvalues()[1].real()};
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-10.0));
  CHECK(ev[1] == doctest::Approx(-1.0));

  CHECK(p.reference(0.1)[0] == doctest::Approx(6.3341).epsilon(1e-4));
  for (double t : {0.0, 0.1, 0.7, 2.0, 5.0}) {
    const Eigen::VectorXd series = oracle::series_expm_apply(p.linear.matrix_a, t, p.linear.u0);
    CHECK((p.reference(t) - series).norm() <= 1e-10 * (1.0 + series.norm()));
  }
}

TEST_CASE("example 1 reference satisfies the ODE") {
  const ProblemInstance p = example1_nonnormal();
  for (double t : {0.05, 0.3, 1.5, 4.0}) {
    Eigen::VectorXd deriv(2);
    for (int k = 0; k < 2; ++k) {
      deriv[k] = oracle::central_diff([&](double s) { return p.reference(s)[k]; }, t, 1e-5);
    }
    const Eigen::VectorXd res = deriv - p.linear.matrix_a * p.reference(t);
    CHECK(res.norm() < 1e-6 * (1.0 + deriv.norm()));
  }
}

TEST_CASE("diffusion-reaction operator stiffness") {
  const ProblemInstance p = build_fd_diffusion_reaction({});
  CHECK(p.linear.dim() == 100);
  Eigen::EigenSolver<Eigen::MatrixXd> es(p.linear.matrix_a, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(rho == doctest::Approx(423.33).epsilon(0.01));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) CHECK(es.eigenvalues()[i].real() < 0.0);
  REQUIRE(p.linear.sparse_a.has_value());
  CHECK((Eigen::MatrixXd(*p.linear.sparse_a) - p.linear.matrix_a).norm() == 0.0);
}

TEST_CASE("diffusion-reaction initial condition and nodes") {
  DiffusionReactionSpec spec;
  const ProblemInstance p = build_fd_diffusion_reaction(spec);
  CHECK(spec.dx() == doctest::Approx(std::numbers::pi / 101.0));
  CHECK(p.nodes[0] == doctest::Approx(spec.dx()));
  CHECK(p.nodes[99] == doctest::Approx(100.0 * spec.dx()));
  for (Eigen::Index i = 0; i < 100; ++i) {
    const double x = p.nodes[i];
    CHECK(p.linear.u0[i] == doctest::Approx(0.4 * std::cos(2.0 * x) + 1.5));
    CHECK(p.reference(0.3)[i] == doctest::Approx(oracle::diffreac_field(0.3, x, 0.1, 10.0, 0.4, 1.5)));
  }
}

TEST_CASE("analytic field solves the PDE with Neumann boundaries") {
  DiffusionReactionSpec spec;
  const double step = 1e-4;
  for (double t : {0.0, 0.2, 0.8}) {
    for (double x : {0.0, 0.4, 1.3, 2.9, std::numbers::pi}) {
      const double ut = oracle::central_diff([&](double s) { return spec.field(s, x); }, t + 0.01, step);
      const double uxx = (spec.field(t + 0.01, x + step) - 2.0 * spec.field(t + 0.01, x) +
                          spec.field(t + 0.01, x - step)) /
                         (step * step);
      CHECK(ut == doctest::Approx(spec.nu * uxx - spec.lambda_r * spec.field(t + 0.01, x)).epsilon(1e-4));
    }
    const double ux0 = oracle::central_diff([&](double x) { return spec.field(t, x); }, 0.0, step);
    const double uxpi = oracle::central_diff([&](double x) { return spec.field(t, x); }, std::numbers::pi, step);
    CHECK(std::abs(ux0) < 1e-8);
    CHECK(std::abs(uxpi) < 1e-8);
  }
}

TEST_CASE("spatial truncation error is second order") {
  auto max_defect = [](int n) {
    DiffusionReactionSpec spec;
    spec.n_interior = n;
    const ProblemInstance p = build_fd_diffusion_reaction(spec);
    const double t = 0.1;
    const Eigen::VectorXd u = p.reference(t);
    const Eigen::VectorXd ut = (p.reference(t + 1e-6) - p.reference(t - 1e-6)) / 2e-6;
    const Eigen::VectorXd defect = p.linear.matrix_a * u - ut;
    // Interior rows only; the boundary closure is one order lower.
    return defect.segment(1, n - 2).cwiseAbs().maxCoeff();
  };
  const double e1 = max_defect(50);
  const double e2 = max_defect(101);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("problem registry") {
  CHECK(problem_names().size() == 3);
  ProblemParams params;
  params.lambda = -3.0;
  params.t_end = 2.0;
  const ProblemInstance d = make_problem("dahlquist", params);
  CHECK(d.linear.matrix_a(0, 0) == -3.0);
  CHECK(d.linear.t_end == 2.0);
  CHECK(make_problem("example1").linear.t_end == 5.0);
  CHECK(make_problem("diffreac").linear.t_end == 1.0);
  CHECK_THROWS_AS(make_problem("heat"), ConfigError);
  DiffusionReactionSpec bad;
  bad.nu = -1.0;
  CHECK_THROWS_AS(build_fd_diffusion_reaction(bad), ArgumentError);
}
