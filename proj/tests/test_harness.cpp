#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "pirpnn/csv.hpp"
#include "pirpnn/errors.hpp"
#include "pirpnn/harness.hpp"
#include "pirpnn/problems.hpp"

using namespace pirpnn;

namespace {
std::vector<ResultRow> synthetic(double order, double c, std::vector<double> hs, double floor = 0.0) {
  std::vector<ResultRow> rows;
  for (double h : hs) rows.push_back({"s", h, c * std::pow(h, order) + floor, 0.0, 1});
  return rows;
}
}  // namespace

TEST_CASE("default solver and step lists") {
  CHECK(default_solvers().size() == 8);
  CHECK(default_solvers()[0] == "pirpnn-m3");
  CHECK(default_solvers()[1] == "pirpnn-m10");
  const auto hs = default_h_values();
  REQUIRE(hs.size() == 10);
  CHECK(hs.front() == 0.5);
  CHECK(hs.back() == std::ldexp(1.0, -10));
}

TEST_CASE("solver names and presets") {
  CHECK_NOTHROW(check_solver_name("radau3"));
  CHECK_NOTHROW(check_solver_name("pirpnn"));
  CHECK_THROWS_AS(check_solver_name("euler"), ConfigError);
  const StepConfig m3 = pirpnn_config("pirpnn-m3", 0.1, {});
  CHECK(m3.m_colloc == 3);
  CHECK(m3.features() == 9);
  const StepConfig m10 = pirpnn_config("pirpnn-m10", 0.1, {});
  CHECK(m10.m_colloc == 10);
  CHECK(m10.features() == 30);
  CHECK_THROWS_AS(pirpnn_config("gauss2", 0.1, {}), ConfigError);
}

TEST_CASE("fit_order on synthetic power laws") {
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625, 0.03125};
  CHECK(fit_order(synthetic(2.0, 3.0, hs)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_order(synthetic(4.0, 0.1, hs)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fit_order(synthetic(2.0, 1.0, hs), 1e-12) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_order drops the saturated tail") {
  std::vector<double> hs;
  for (int k = 1; k <= 10; ++k) hs.push_back(std::ldexp(1.0, -k));
  const auto rows = synthetic(3.0, 1.0, hs, 1e-9);
  CHECK(fit_order(rows) == doctest::Approx(3.0).epsilon(0.02));
  CHECK(fit_order(rows, 1e-9) == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("fit_order needs three usable rows") {
  CHECK_THROWS_AS(fit_order(synthetic(2.0, 1.0, {0.5, 0.25})), InsufficientDataError);
  CHECK_THROWS_AS(fit_order(synthetic(2.0, 1.0, {0.5, 0.25, 0.125}), 0.01), InsufficientDataError);
  CHECK_THROWS_AS(fit_order({}), InsufficientDataError);
}

TEST_CASE("trajectory error") {
  Trajectory t;
  t.times = {0.0, 1.0};
  t.states = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 3.0)};
  const double e = l2_trajectory_error(t, [](double s) { return Eigen::VectorXd::Constant(1, 1.0 + s); });
  CHECK(e == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("zero operator gives exact trajectories") {
  ExperimentSpec spec;
  spec.problem = "dahlquist";
  spec.params.lambda = 0.0;
  spec.h_values = {0.25, 0.1};
  spec.timing = false;
  for (const auto& row : run_convergence(spec)) CHECK(row.l2_error <= 1e-14);
}

TEST_CASE("backward Euler halves its error with h") {
  ExperimentSpec spec;
  spec.problem = "dahlquist";
  spec.solvers = {"backward-euler"};
  spec.h_values = {1.0 / 64, 1.0 / 128, 1.0 / 256};
  spec.timing = false;
  const auto rows = run_convergence(spec);
  CHECK(rows[0].l2_error / rows[1].l2_error == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rows[1].l2_error / rows[2].l2_error == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rows[2].steps == 256);
}

TEST_CASE("classical orders on example 1") {
  ExperimentSpec spec;
  spec.problem = "example1";
  spec.solvers = {"implicit-midpoint", "gauss2", "radau2", "radau3"};
  spec.h_values = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  spec.timing = false;
  const auto rows = run_convergence(spec);
  CHECK(fit_order(rows_for(rows, "implicit-midpoint")) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(fit_order(rows_for(rows, "gauss2")) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(fit_order(rows_for(rows, "radau2")) == doctest::Approx(3.0).epsilon(0.05));
  CHECK(fit_order(rows_for(rows, "radau3")) == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("pirpnn-m10 beats backward Euler on example 1") {
  ExperimentSpec spec;
  spec.problem = "example1";
  spec.solvers = {"pirpnn-m10", "backward-euler"};
  spec.h_values = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  spec.timing = false;
  const auto rows = run_convergence(spec);
  const auto pi = rows_for(rows, "pirpnn-m10");
  const auto be = rows_for(rows, "backward-euler");
  for (std::size_t k = 0; k < pi.size(); ++k) {
    CHECK(pi[k].l2_error < be[k].l2_error);
    if (k > 0) CHECK(pi[k].l2_error < pi[k - 1].l2_error);
  }
}

TEST_CASE("parallel and serial accuracy passes agree") {
  ExperimentSpec spec;
  spec.problem = "example1";
  spec.solvers = {"pirpnn-m3", "gauss2"};
  spec.h_values = {0.25, 0.125};
  spec.timing = false;
  const auto a = run_convergence(spec);
  spec.parallel = false;
  const auto b = run_convergence(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].solver == b[k].solver);
    CHECK(a[k].h == b[k].h);
    CHECK(a[k].l2_error == b[k].l2_error);
  }
}

TEST_CASE("timed runs report positive medians") {
  ExperimentSpec spec;
  spec.problem = "dahlquist";
  spec.solvers = {"trapezoidal"};
  spec.h_values = {0.125};
  spec.repetitions = 3;
  const auto rows = run_convergence(spec);
  CHECK(rows[0].wall_seconds > 0.0);
}

TEST_CASE("experiment validation") {
  ExperimentSpec spec;
  spec.solvers = {"bogus"};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = {};
  spec.h_values = {0.1, -0.1};
  CHECK_THROWS(spec.validate());
  spec = {};
  spec.problem = "nope";
  CHECK_THROWS_AS(run_convergence(spec), ConfigError);
}

TEST_CASE("results CSV layout") {
  std::vector<ResultRow> rows{{"gauss2", 0.5, 1e-3, 0.25, 10}, {"radau3", 0.25, 2.5e-7, 0.125, 20}};
  std::ostringstream os;
  write_results_csv(os, rows);
  CHECK(os.str() == "solver,h,l2_error,wall_seconds,steps\ngauss2,0.5,0.001,0.25,10\nradau3,0.25,2.5e-07,0.125,20\n");
  rows[1].l2_error_semidiscrete = 1e-9;
  std::ostringstream os2;
  write_results_csv(os2, rows);
  CHECK(os2.str().rfind("solver,h,l2_error,wall_seconds,steps,l2_error_semidiscrete\n", 0) == 0);
  CHECK(os2.str().find("radau3,0.25,2.5e-07,0.125,20,1e-09\n") != std::string::npos);
}

TEST_CASE("csv number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    CHECK(std::stod(csv::format_double(v)) == v);
  }
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("plain") == "plain");
}
