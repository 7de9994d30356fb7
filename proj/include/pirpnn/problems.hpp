#pragma once

// Benchmark problems with exact or analytic references.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pirpnn/stepper.hpp"

namespace pirpnn {

struct DiffusionReactionSpec {
  double nu = 0.1;
  double lambda_r = 10.0;
  double a_amp = 0.4;
  double c_amp = 1.5;
  int n_interior = 100;
  double t_end = 1.0;

  void validate() const;
  /// Grid spacing pi / (n + 1); interior node i (1-based) sits at i * dx.
  double dx() const;
  /// u(t, x) = a exp(-(4 nu + lambda) t) cos(2x) + c exp(-lambda t)
  double field(double t, double x) const;
};

/// A linear benchmark: the ODE system plus its reference solution.
struct ProblemInstance {
  std::string name;
  LinearProblem linear;
  /// Reference state at time t. For the diffusion-reaction problem this is
  /// the PDE field sampled at the interior nodes, not the semi-discrete solution.
  std::function<Eigen::VectorXd(double)> reference;
  /// True when the reference solves the ODE system exactly.
  bool reference_is_exact = true;
  /// Interior node coordinates (diffusion-reaction only).
  Eigen::VectorXd nodes;
};

ProblemInstance dahlquist(double lambda, double u0 = 1.0, double t0 = 0.0, double t_end = 1.0);

/// A = [[-10, 100], [0, -1]] on [0, 5] with u0 = (1, 1) unless given.
ProblemInstance example1_nonnormal(const Eigen::Vector2d& u0 = Eigen::Vector2d(1.0, 1.0), double t_end = 5.0);

/// Method-of-lines operator for u_t = nu u_xx - lambda u on [0, pi] with
/// zero-flux ends. Ghost values u_0 = (4u_1 - u_2)/3 and
/// u_{n+1} = (4u_n - u_{n-1})/3 are folded into the first and last rows.
ProblemInstance build_fd_diffusion_reaction(const DiffusionReactionSpec& spec);

/// Parameters addressable by name from configs and the command line.
struct ProblemParams {
  double lambda = -1.0;
  double u0 = 1.0;
  /// Non-positive keeps the problem's own default end time.
  double t_end = 0.0;
  DiffusionReactionSpec diffreac;
};

/// Registry lookup: "dahlquist", "example1", "diffreac". Throws ConfigError otherwise.
ProblemInstance make_problem(const std::string& name, const ProblemParams& params = {});
const std::vector<std::string>& problem_names();

}  // namespace pirpnn
