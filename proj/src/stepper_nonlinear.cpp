#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "pirpnn/errors.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn {

namespace {

Eigen::MatrixXd jacobian_at(const OdeProblem& problem, double t, const Eigen::VectorXd& u, double fd_step) {
  if (problem.jacobian) return problem.jacobian(t, u);
  const Eigen::Index d = u.size();
  Eigen::MatrixXd jac(d, d);
  Eigen::VectorXd probe = u;
  for (Eigen::Index l = 0; l < d; ++l) {
    const double step = fd_step * std::max(1.0, std::abs(u[l]));
    probe[l] = u[l] + step;
    const Eigen::VectorXd plus = problem.rhs(t, probe);
    probe[l] = u[l] - step;
    const Eigen::VectorXd minus = problem.rhs(t, probe);
    probe[l] = u[l];
    jac.col(l) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

// Residuals F_(k,i) and their Jacobian for the window starting at (t, u).
struct WindowSystem {
  const OdeProblem& problem;
  const CollocationBlocks& blocks;
  const CollocationGrid& grid;
  const Eigen::VectorXd& u;
  double fd_step;

  Eigen::Index d() const { return u.size(); }
  int m() const { return static_cast<int>(blocks.value.rows()); }
  int n() const { return static_cast<int>(blocks.value.cols()); }

  // Ansatz value at collocation point i for weights w (component-major).
  Eigen::VectorXd state(const Eigen::VectorXd& w, int i) const {
    Eigen::VectorXd out = u;
    for (Eigen::Index k = 0; k < d(); ++k) out[k] += blocks.drift.row(i).dot(w.segment(k * n(), n()));
    return out;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& w) const {
    Eigen::VectorXd f(d() * m());
    for (int i = 0; i < m(); ++i) {
      const Eigen::VectorXd rhs = problem.rhs(grid.point(i), state(w, i));
      for (Eigen::Index k = 0; k < d(); ++k) {
        f[k * m() + i] = blocks.value.row(i).dot(w.segment(k * n(), n())) - rhs[k];
      }
    }
    return f;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& w) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d() * m(), d() * n());
    for (int i = 0; i < m(); ++i) {
      const Eigen::MatrixXd jf = jacobian_at(problem, grid.point(i), state(w, i), fd_step);
      for (Eigen::Index k = 0; k < d(); ++k) {
        for (Eigen::Index l = 0; l < d(); ++l) {
          auto row = jac.block(k * m() + i, l * n(), 1, n());
          if (k == l) row += blocks.value.row(i);
          if (jf(k, l) != 0.0) row -= jf(k, l) * blocks.drift.row(i);
        }
      }
    }
    return jac;
  }
};

double objective(const Eigen::VectorXd& f, const Eigen::VectorXd& w, double delta) {
  return 0.5 * f.squaredNorm() + 0.5 * delta * w.squaredNorm();
}

}  // namespace

void OdeProblem::validate() const {
  if (!rhs) throw ArgumentError("ODE right-hand side is empty");
  if (u0.size() < 1) throw ArgumentError("u0 must be nonempty");
  if (!(t_end > t0)) throw ArgumentError("t_end must exceed t0");
}

Trajectory step_nonlinear(const OdeProblem& problem, const StepConfig& cfg, const GaussNewtonSpec& gn) {
  problem.validate();
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  // alpha_u follows the linearization at the initial state.
  const Eigen::MatrixXd jac0 = jacobian_at(problem, problem.t0, problem.u0, gn.fd_step);
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac0, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();

  const Eigen::Index d = problem.u0.size();
  const int n = cfg.features();
  const int m = cfg.m_colloc;
  const RidgeSpec ridge = cfg.ridge();

  Trajectory traj;
  traj.times.push_back(problem.t0);
  traj.states.push_back(problem.u0);
  const std::vector<double> steps = step_sizes(problem.t0, problem.t_end, cfg.h);

  Eigen::VectorXd u = problem.u0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d * n);
  double t = problem.t0;
  for (std::size_t l = 0; l < steps.size(); ++l) {
    const double h = steps[l];
    StepConfig local = cfg;
    local.h = h;
    const RbfBasis basis = make_window_basis(local, rho, h, t, static_cast<std::int64_t>(l));
    const CollocationGrid grid = CollocationGrid::equispaced(m, t, h);
    const CollocationBlocks blocks = assemble_blocks(basis, grid);
    const WindowSystem sys{problem, blocks, grid, u, gn.fd_step};

    Eigen::VectorXd f = sys.residual(w);
    double obj = objective(f, w, cfg.delta);
    int applied = 0;
    bool converged = false;
    for (int iter = 0; iter <= gn.max_iters; ++iter) {
      if (f.norm() < gn.tol) {
        converged = true;
        break;
      }
      // Gauss-Newton step as a ridge problem in the new weights v = w + dw:
      //   min ||J v - (J w - F)||^2 + delta ||v||^2
      const Eigen::MatrixXd jac = sys.jacobian(w);
      const Eigen::VectorXd target = jac * w - f;
      const Eigen::VectorXd v = ridge_solve(jac, target, ridge);
      const Eigen::VectorXd dw = v - w;
      if (dw.norm() <= gn.tol * (1.0 + w.norm())) {
        converged = true;
        break;
      }
      if (iter == gn.max_iters) break;

      double mu = 1.0;
      bool accepted = false;
      for (int k = 0; k <= gn.max_halvings; ++k, mu *= 0.5) {
        const Eigen::VectorXd trial = w + mu * dw;
        const Eigen::VectorXd ft = sys.residual(trial);
        const double ot = objective(ft, trial, cfg.delta);
        if (std::isfinite(ot) && ot < obj) {
          w = trial;
          f = ft;
          obj = ot;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // No descent left along the Gauss-Newton direction: numerical minimum.
        converged = true;
        break;
      }
      ++applied;
    }
    if (!converged) {
      throw StepFailure("Gauss-Newton did not converge in window " + std::to_string(l) + " at t=" +
                            std::to_string(t),
                        f.norm());
    }

    for (Eigen::Index k = 0; k < d; ++k) u[k] += blocks.drift.row(m - 1).dot(w.segment(k * n, n));
    t = (l + 1 == steps.size()) ? problem.t_end : problem.t0 + static_cast<double>(l + 1) * cfg.h;
    traj.times.push_back(t);
    traj.states.push_back(u);
    traj.iterations.push_back(applied);
  }
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  traj.solver = "pirpnn-nonlinear";
  traj.config = cfg.describe();
  return traj;
}

}  // namespace pirpnn
