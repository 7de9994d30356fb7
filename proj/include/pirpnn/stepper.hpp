#pragma once

// Random-feature collocation time stepping.
//
// On each window [t_{l-1}, t_{l-1} + h] every component is represented as
//   u(t) = u_{l-1} + (t - t_{l-1}) * sum_j w_j phi_j(t)
// so the initial value holds by construction. The weights minimize the ODE
// residual at M collocation points plus a ridge penalty delta * ||w||^2.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "pirpnn/basis.hpp"
#include "pirpnn/lstsq.hpp"

namespace pirpnn {

struct AlphaPolicy {
  enum class Kind { DefaultFormula, Fixed };
  Kind kind = Kind::DefaultFormula;
  double value = 0.0;

  static AlphaPolicy default_formula() { return {}; }
  static AlphaPolicy fixed(double alpha) { return {Kind::Fixed, alpha}; }

  double resolve(double lambda_abs, double h, int n_features) const;
  std::string describe() const;
};

struct StepConfig {
  int m_colloc = 3;
  /// 0 selects 3 * m_colloc.
  int n_features = 0;
  double delta = 1e-10;
  double h = 0.1;
  AlphaPolicy alpha;
  std::uint64_t seed = 0;
  bool freeze_basis = true;

  int features() const { return n_features > 0 ? n_features : 3 * m_colloc; }
  void validate() const;
  RidgeSpec ridge() const;
  /// Basis seed for window `window` (constant when the basis is frozen).
  std::uint64_t window_seed(std::int64_t window) const;
  std::string describe() const;
};

struct LinearProblem {
  Eigen::MatrixXd matrix_a;
  /// Same operator in sparse form, when the problem is naturally sparse.
  std::optional<Eigen::SparseMatrix<double>> sparse_a;
  Eigen::VectorXd u0;
  double t0 = 0.0;
  double t_end = 1.0;

  Eigen::Index dim() const { return matrix_a.rows(); }
  void validate() const;
};

struct OdeProblem {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> rhs;
  /// Optional; central finite differences are used when empty.
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd u0;
  double t0 = 0.0;
  double t_end = 1.0;

  void validate() const;
};

/// Per-window scalar map u(t_{l-1} + zeta h) = S(zeta) * u_{l-1} for u' = lambda u.
struct StepOperator {
  CollocationGrid grid;
  std::shared_ptr<const RbfBasis> basis;
  std::complex<double> lambda;
  double h = 0.0;
  /// Weights for unit initial value divided by lambda: w = lambda * u_{l-1} * weights.
  Eigen::VectorXcd weights;
  std::vector<double> eval_fractions;
  Eigen::VectorXcd map;

  /// S at an arbitrary in-window fraction.
  std::complex<double> multiplier_at(double fraction) const;
  /// S at the window end, i.e. the step hand-off multiplier.
  std::complex<double> endpoint() const { return map[map.size() - 1]; }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  double wall_time = 0.0;
  /// Gauss-Newton updates applied per window (nonlinear stepping only).
  std::vector<int> iterations;
  std::string solver;
  std::string config;
};

struct GaussNewtonSpec {
  double tol = 1e-12;
  int max_iters = 50;
  /// Step halvings tried before an iteration is declared stalled.
  int max_halvings = 30;
  double fd_step = 1e-7;
};

/// Uniform step sizes covering [t0, t_end]; the last one is shortened to land on t_end.
std::vector<double> step_sizes(double t0, double t_end, double h);

/// Basis for one window, with alpha_u resolved from the policy for |lambda|.
RbfBasis make_window_basis(const StepConfig& cfg, double lambda_abs, double h, double window_start,
                           std::int64_t window);

StepOperator build_scalar_step(std::complex<double> lambda, const StepConfig& cfg,
                               const RbfBasis& basis);

/// Decoupled stepping in the eigenbasis of A. Throws NotDiagonalizableError
/// when the eigenvector matrix is too ill-conditioned.
Trajectory step_linear_diagonalizable(const LinearProblem& problem, const StepConfig& cfg);

/// Fully coupled least-squares stepping with one shared basis for all components.
Trajectory step_linear_coupled(const LinearProblem& problem, const StepConfig& cfg);

/// Eigen path when the eigenbasis is well conditioned, coupled path otherwise.
Trajectory step_linear(const LinearProblem& problem, const StepConfig& cfg);

Trajectory step_nonlinear(const OdeProblem& problem, const StepConfig& cfg,
                          const GaussNewtonSpec& gn = {});

/// Condition number above which the eigen path is refused.
inline constexpr double kMaxEigenvectorCondition = 1e8;
/// Imaginary residue tolerated when transforming back from the eigenbasis.
inline constexpr double kMaxImaginaryResidue = 1e-10;

/// Real step matrix of the coupled scheme for one window length (d x d):
/// u_l = T u_{l-1}.
Eigen::MatrixXd coupled_step_matrix(const LinearProblem& problem, const StepConfig& cfg,
                                    const RbfBasis& basis);

/// Real step matrix of the eigen path for one window length.
Eigen::MatrixXd diagonalizable_step_matrix(const LinearProblem& problem, const StepConfig& cfg,
                                           double h, std::int64_t window);

struct JordanStep {
  Eigen::VectorXd y_next;
  /// Upper-triangular m x m matrix with y_next = transition * y_prev.
  Eigen::MatrixXd transition;
  /// Lambda_l = h <k_l, q_l> / ||k_l||^2 for l = 1..m (zero-based here).
  Eigen::VectorXd lambdas;
  /// Minimum-norm weights of each component.
  std::vector<Eigen::VectorXd> weights;
};

/// One window of the single-collocation scheme on the Jordan block J_m(lambda),
/// each component carrying its own cfg.features() Gaussian features and the
/// collocation point at the window end. Weights come from the backward
/// recursion r_m = alpha_m, r_l = Lambda_{l+1} r_{l+1} + alpha_l.
JordanStep jordan_block_step(double lambda, int m, const StepConfig& cfg, const Eigen::VectorXd& y_prev,
                             double window_start = 0.0, std::int64_t window = 0);

}  // namespace pirpnn
