#include "pirpnn/errors.hpp"
#include "pirpnn/rng.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn {

JordanStep jordan_block_step(double lambda, int m, const StepConfig& cfg, const Eigen::VectorXd& y_prev,
                             double window_start, std::int64_t window) {
  cfg.validate();
  if (m < 1) throw ArgumentError("Jordan block size must be positive");
  if (y_prev.size() != m) throw ArgumentError("y_prev length differs from block size");

  const double h = cfg.h;
  const int n = cfg.features();
  const double t_end = window_start + h;
  const double alpha = cfg.alpha.resolve(std::abs(lambda), h, n);

  // Feature vectors at the single collocation point (window end):
  //   q_l = phi(t_end),  k_l = phi(t_end) + h phi'(t_end) - lambda h phi(t_end)
  std::vector<Eigen::VectorXd> q(m), k(m);
  Eigen::VectorXd k_norm2(m);
  JordanStep out;
  out.lambdas.resize(m);
  for (int l = 0; l < m; ++l) {
    const RbfBasis basis = sample_basis(n, alpha, window_start, h, rng::derive(cfg.window_seed(window), l));
    q[l] = eval_features(basis, t_end);
    k[l] = q[l] + h * eval_feature_derivs(basis, t_end) - lambda * h * q[l];
    k_norm2[l] = k[l].squaredNorm();
    if (!(k_norm2[l] > 0.0)) throw DegenerateFeatureError("Jordan step: feature vector k vanished");
    out.lambdas[l] = h * k[l].dot(q[l]) / k_norm2[l];
  }

  // Backward recursion on the right-hand sides r_l.
  Eigen::VectorXd r(m);
  r[m - 1] = lambda * y_prev[m - 1];
  for (int l = m - 2; l >= 0; --l) {
    r[l] = out.lambdas[l + 1] * r[l + 1] + lambda * y_prev[l] + y_prev[l + 1];
  }
  out.weights.resize(m);
  out.y_next.resize(m);
  for (int l = 0; l < m; ++l) {
    out.weights[l] = (r[l] / k_norm2[l]) * k[l];
    out.y_next[l] = y_prev[l] + h * out.weights[l].dot(q[l]);
  }

  // Same recursion with unit inputs gives r = R y_prev, hence y_next = (I + diag(Lambda) R) y_prev.
  Eigen::MatrixXd rmat = Eigen::MatrixXd::Zero(m, m);
  rmat(m - 1, m - 1) = lambda;
  for (int l = m - 2; l >= 0; --l) {
    rmat.row(l) = out.lambdas[l + 1] * rmat.row(l + 1);
    rmat(l, l) += lambda;
    rmat(l, l + 1) += 1.0;
  }
  out.transition = Eigen::MatrixXd::Identity(m, m);
  out.transition += out.lambdas.asDiagonal() * rmat;
  out.transition.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

}  // namespace pirpnn
