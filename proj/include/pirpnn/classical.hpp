#pragma once

// Implicit Runge-Kutta comparators for linear systems u' = A u.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pirpnn/stepper.hpp"

namespace pirpnn {

struct RkScheme {
  std::string name;
  Eigen::MatrixXd butcher_a;
  Eigen::VectorXd butcher_b;
  Eigen::VectorXd butcher_c;
  int order = 0;

  int stages() const { return static_cast<int>(butcher_b.size()); }
};

namespace schemes {
const RkScheme& backward_euler();
const RkScheme& implicit_midpoint();
const RkScheme& trapezoidal();
const RkScheme& gauss2();
/// Radau IIA, two stages.
const RkScheme& radau2();
/// Radau IIA, three stages.
const RkScheme& radau3();
/// All six comparators in a fixed order.
const std::vector<const RkScheme*>& all();
}  // namespace schemes

/// Lookup by name ("backward-euler", "implicit-midpoint", "trapezoidal",
/// "gauss2", "radau2", "radau3"); throws ConfigError for unknown names.
const RkScheme& scheme_by_name(std::string_view name);

/// R(z) = det(I - zA + z 1 b^T) / det(I - zA). Returns nullopt at a pole.
std::optional<std::complex<double>> stability_function(const RkScheme& scheme, std::complex<double> z);

/// Stability polynomial sum_{k<=order} z^k / k! of the classical explicit RK
/// method of that order (1..4), used for comparison contours.
std::complex<double> explicit_rk_stability(int order, std::complex<double> z);

/// One step from u; throws StepFailure when the stage system is singular.
Eigen::VectorXd rk_step_linear(const RkScheme& scheme, const Eigen::MatrixXd& a, const Eigen::VectorXd& u,
                               double h);

/// Step matrix R with u_{n+1} = R u_n for the linear system (dense, d x d).
Eigen::MatrixXd rk_step_matrix(const RkScheme& scheme, const LinearProblem& problem, double h);

/// Uniform steps of size h over the span, last step shortened to hit t_end.
Trajectory rk_integrate(const RkScheme& scheme, const LinearProblem& problem, double h);

}  // namespace pirpnn
