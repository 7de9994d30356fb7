#include "pirpnn/problems.hpp"

#include <cmath>
#include <numbers>

#include "pirpnn/errors.hpp"

namespace pirpnn {

void DiffusionReactionSpec::validate() const {
  if (!(nu > 0.0)) throw ArgumentError("nu must be positive");
  if (n_interior < 3) throw ArgumentError("n_interior must be >= 3");
  if (!(t_end > 0.0)) throw ArgumentError("t_end must be positive");
}

double DiffusionReactionSpec::dx() const { return std::numbers::pi / (n_interior + 1); }

double DiffusionReactionSpec::field(double t, double x) const {
  return a_amp * std::exp(-(4.0 * nu + lambda_r) * t) * std::cos(2.0 * x) + c_amp * std::exp(-lambda_r * t);
}

ProblemInstance dahlquist(double lambda, double u0, double t0, double t_end) {
  ProblemInstance p;
  p.name = "dahlquist";
  p.linear.matrix_a = Eigen::MatrixXd::Constant(1, 1, lambda);
  p.linear.u0 = Eigen::VectorXd::Constant(1, u0);
  p.linear.t0 = t0;
  p.linear.t_end = t_end;
  p.reference = [=](double t) { return Eigen::VectorXd::Constant(1, u0 * std::exp(lambda * (t - t0))); };
  p.linear.validate();
  return p;
}

ProblemInstance example1_nonnormal(const Eigen::Vector2d& u0, double t_end) {
  ProblemInstance p;
  p.name = "example1";
  p.linear.matrix_a.resize(2, 2);
  p.linear.matrix_a << -10.0, 100.0, 0.0, -1.0;
  p.linear.u0 = u0;
  p.linear.t0 = 0.0;
  p.linear.t_end = t_end;
  p.reference = [u0](double t) {
    const double e1 = std::exp(-t);
    const double e10 = std::exp(-10.0 * t);
    Eigen::VectorXd u(2);
    u[0] = e10 * u0[0] + (100.0 / 9.0) * (e1 - e10) * u0[1];
    u[1] = e1 * u0[1];
    return u;
  };
  p.linear.validate();
  return p;
}

ProblemInstance build_fd_diffusion_reaction(const DiffusionReactionSpec& spec) {
  spec.validate();
  const int n = spec.n_interior;
  const double dx = spec.dx();
  const double k = spec.nu / (dx * dx);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    double diag = -2.0 * k - spec.lambda_r;
    double left = k;
    double right = k;
    if (i == 0) {
      diag += k * 4.0 / 3.0;
      right -= k / 3.0;
      left = 0.0;
    }
    if (i == n - 1) {
      diag += k * 4.0 / 3.0;
      left -= k / 3.0;
      right = 0.0;
    }
    trips.emplace_back(i, i, diag);
    if (i > 0) trips.emplace_back(i, i - 1, left);
    if (i < n - 1) trips.emplace_back(i, i + 1, right);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());

  ProblemInstance p;
  p.name = "diffreac";
  p.linear.matrix_a = Eigen::MatrixXd(a);
  p.linear.sparse_a = std::move(a);
  p.nodes = Eigen::VectorXd::LinSpaced(n, dx, n * dx);
  p.linear.u0 = p.nodes.unaryExpr([&](double x) { return spec.field(0.0, x); });
  p.linear.t0 = 0.0;
  p.linear.t_end = spec.t_end;
  p.reference = [spec, nodes = p.nodes](double t) {
    return Eigen::VectorXd(nodes.unaryExpr([&](double x) { return spec.field(t, x); }));
  };
  p.reference_is_exact = false;
  p.linear.validate();
  return p;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"dahlquist", "example1", "diffreac"};
  return names;
}

ProblemInstance make_problem(const std::string& name, const ProblemParams& params) {
  if (name == "dahlquist") {
    return dahlquist(params.lambda, params.u0, 0.0, params.t_end > 0.0 ? params.t_end : 1.0);
  }
  if (name == "example1") {
    return example1_nonnormal(Eigen::Vector2d(1.0, 1.0), params.t_end > 0.0 ? params.t_end : 5.0);
  }
  if (name == "diffreac") {
    DiffusionReactionSpec spec = params.diffreac;
    if (params.t_end > 0.0) spec.t_end = params.t_end;
    return build_fd_diffusion_reaction(spec);
  }
  throw ConfigError("unknown problem '" + name + "' (expected dahlquist, example1 or diffreac)");
}

}  // namespace pirpnn
