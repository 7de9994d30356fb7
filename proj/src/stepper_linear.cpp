#include <chrono>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pirpnn/errors.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn {

namespace {

using Clock = std::chrono::steady_clock;

struct EigenBasis {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXcd inverse;
  double condition = 0.0;
};

EigenBasis decompose(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
  if (es.info() != Eigen::Success) throw NotDiagonalizableError("eigendecomposition failed", INFINITY);
  EigenBasis eb{es.eigenvalues(), es.eigenvectors(), {}, 0.0};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eb.vectors);
  const auto& s = svd.singularValues();
  eb.condition = s[s.size() - 1] > 0.0 ? s[0] / s[s.size() - 1] : INFINITY;
  if (!(eb.condition <= kMaxEigenvectorCondition)) {
    throw NotDiagonalizableError("eigenvector matrix condition number exceeds threshold; use step_linear_coupled",
                                 eb.condition);
  }
  eb.inverse = eb.vectors.inverse();
  return eb;
}

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd eigen_step_matrix(const EigenBasis& eb, const StepConfig& cfg, double h, std::int64_t window) {
  const Eigen::Index d = eb.values.size();
  StepConfig local = cfg;
  local.h = h;
  Eigen::VectorXcd mult(d);
  // Conjugate eigenvalues share |lambda| and thetas, so their multipliers are
  // conjugate and the back-transformed matrix is real.
#pragma omp parallel for if (d > 32) schedule(static)
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::complex<double> lam = eb.values[k];
    const RbfBasis basis = make_window_basis(local, std::abs(lam), h, 0.0, window);
    mult[k] = build_scalar_step(lam, local, basis).endpoint();
  }
  const Eigen::MatrixXcd t = eb.vectors * mult.asDiagonal() * eb.inverse;
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  if (t.imag().cwiseAbs().maxCoeff() > kMaxImaginaryResidue * scale) {
    throw StepFailure("eigen path: imaginary residue above tolerance after back-transform");
  }
  return t.real();
}

template <typename MatrixFor>
Trajectory march(const LinearProblem& problem, const StepConfig& cfg, MatrixFor&& matrix_for) {
  const auto started = Clock::now();
  Trajectory traj;
  traj.times.push_back(problem.t0);
  traj.states.push_back(problem.u0);
  const std::vector<double> steps = step_sizes(problem.t0, problem.t_end, cfg.h);
  std::map<double, Eigen::MatrixXd> cache;
  Eigen::VectorXd u = problem.u0;
  double t = problem.t0;
  for (std::size_t l = 0; l < steps.size(); ++l) {
    const double h = steps[l];
    const auto window = static_cast<std::int64_t>(l);
    if (cfg.freeze_basis) {
      auto it = cache.find(h);
      if (it == cache.end()) it = cache.emplace(h, matrix_for(h, window)).first;
      u = it->second * u;
    } else {
      u = matrix_for(h, window) * u;
    }
    t = (l + 1 == steps.size()) ? problem.t_end : problem.t0 + static_cast<double>(l + 1) * cfg.h;
    traj.times.push_back(t);
    traj.states.push_back(u);
  }
  traj.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  traj.config = cfg.describe();
  return traj;
}

}  // namespace

void LinearProblem::validate() const {
  if (matrix_a.rows() < 1 || matrix_a.rows() != matrix_a.cols()) throw ArgumentError("A must be square, d >= 1");
  if (u0.size() != matrix_a.rows()) throw ArgumentError("u0 dimension differs from A");
  if (!(t_end > t0)) throw ArgumentError("t_end must exceed t0");
  if (sparse_a && (sparse_a->rows() != matrix_a.rows() || sparse_a->cols() != matrix_a.cols())) {
    throw ArgumentError("sparse A shape differs from dense A");
  }
}

Eigen::MatrixXd diagonalizable_step_matrix(const LinearProblem& problem, const StepConfig& cfg, double h,
                                           std::int64_t window) {
  problem.validate();
  return eigen_step_matrix(decompose(problem.matrix_a), cfg, h, window);
}

Trajectory step_linear_diagonalizable(const LinearProblem& problem, const StepConfig& cfg) {
  problem.validate();
  cfg.validate();
  const auto started = Clock::now();
  const EigenBasis eb = decompose(problem.matrix_a);
  Trajectory traj = march(problem, cfg, [&](double h, std::int64_t window) {
    return eigen_step_matrix(eb, cfg, h, window);
  });
  traj.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  traj.solver = "pirpnn-eigen";
  return traj;
}

Eigen::MatrixXd coupled_step_matrix(const LinearProblem& problem, const StepConfig& cfg, const RbfBasis& basis) {
  problem.validate();
  const Eigen::Index d = problem.dim();
  const int m = cfg.m_colloc;
  const int n = basis.n_features;
  const double h = basis.window_len;
  const CollocationGrid grid = CollocationGrid::equispaced(m, basis.window_start, h);
  const CollocationBlocks blocks = assemble_blocks(basis, grid);
  const Eigen::MatrixXd& a = problem.matrix_a;

  // Unknowns ordered component-major: w[(k, j)] = W(j, k) at k * N + j.
  // Residual rows (k, i) at k * M + i:
  //   sum_j W(j,k) value(i,j) - sum_l A(k,l) sum_j W(j,l) drift(i,j) = (A u)_k
  // i.e. J = I_d (x) value - A (x) drift and rhs = (A (x) 1_M) u.
  Eigen::MatrixXd rhs(d * m, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (int i = 0; i < m; ++i) rhs.row(k * m + i) = a.row(k);
  }

  Eigen::MatrixXd weights_op;  // (N d) x d
  const bool use_sparse = problem.sparse_a.has_value() && n * d > 600;
  if (use_sparse) {
    const Eigen::SparseMatrix<double>& sa = *problem.sparse_a;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>((d + sa.nonZeros()) * m * n));
    for (Eigen::Index k = 0; k < d; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) trips.emplace_back(k * m + i, k * n + j, blocks.value(i, j));
      }
    }
    for (int col = 0; col < sa.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sa, col); it; ++it) {
        const Eigen::Index k = it.row();
        const Eigen::Index l = it.col();
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < n; ++j) trips.emplace_back(k * m + i, l * n + j, -it.value() * blocks.drift(i, j));
        }
      }
    }
    Eigen::SparseMatrix<double> jbig(d * m, d * n);
    jbig.setFromTriplets(trips.begin(), trips.end());
    weights_op = sparse_rank_revealing_solve(jbig, rhs, cfg.ridge());
  } else {
    Eigen::MatrixXd jbig = Eigen::MatrixXd::Zero(d * m, d * n);
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index l = 0; l < d; ++l) {
        auto block = jbig.block(k * m, l * n, m, n);
        if (k == l) block += blocks.value;
        if (a(k, l) != 0.0) block -= a(k, l) * blocks.drift;
      }
    }
    weights_op = ridge_solve(jbig, rhs, cfg.ridge());
  }

  const Eigen::VectorXd phi_end = eval_features(basis, grid.point(m - 1));
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    t.row(k) += h * phi_end.transpose() * weights_op.middleRows(k * n, n);
  }
  return t;
}

Trajectory step_linear_coupled(const LinearProblem& problem, const StepConfig& cfg) {
  problem.validate();
  cfg.validate();
  const auto started = Clock::now();
  const double rho = spectral_radius(problem.matrix_a);
  Trajectory traj = march(problem, cfg, [&](double h, std::int64_t window) {
    StepConfig local = cfg;
    local.h = h;
    const RbfBasis basis = make_window_basis(local, rho, h, 0.0, window);
    return coupled_step_matrix(problem, local, basis);
  });
  traj.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
  traj.solver = "pirpnn-coupled";
  return traj;
}

Trajectory step_linear(const LinearProblem& problem, const StepConfig& cfg) {
  try {
    return step_linear_diagonalizable(problem, cfg);
  } catch (const NotDiagonalizableError&) {
    return step_linear_coupled(problem, cfg);
  }
}

}  // namespace pirpnn
