#pragma once

// Gaussian RBF random features for one step window and the collocation
// matrices built from them.
//
// Feature j on the window [t0, t0 + h]:
//   phi_j(t) = exp(-alpha_u * theta_j * (t - tau_j)^2),  tau_j = t0 + xi_j * h,
// with xi_j = (j + 1) / N (zero-based j) and theta_j ~ U[0, 1].

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace pirpnn {

struct RbfBasis {
  int n_features = 0;
  double alpha_u = 0.0;
  std::vector<double> thetas;
  std::vector<double> center_fractions;
  double window_start = 0.0;
  double window_len = 1.0;
  std::uint64_t seed = 0;

  double center(int j) const { return window_start + center_fractions[j] * window_len; }

  /// Same thetas and centers, different global scale.
  RbfBasis with_alpha(double alpha) const;
  /// Same features translated to a window starting at `start`.
  RbfBasis shifted(double start) const;
};

/// M equispaced in-window fractions zeta_i = (i + 1) / M; the last one is 1.
struct CollocationGrid {
  int n_points = 0;
  std::vector<double> fractions;
  double window_start = 0.0;
  double window_len = 1.0;

  static CollocationGrid equispaced(int m, double window_start = 0.0, double window_len = 1.0);

  double point(int i) const { return window_start + fractions[i] * window_len; }
};

RbfBasis sample_basis(int n_features, double alpha_u, double window_start, double window_len,
                      std::uint64_t seed);

Eigen::VectorXd eval_features(const RbfBasis& basis, double t);
Eigen::VectorXd eval_feature_derivs(const RbfBasis& basis, double t);

/// Real blocks of the collocation operator, both M x N.
///   value(i, j) = phi_j(c_i) + s_i * phi_j'(c_i)     (d/dt of the ansatz term)
///   drift(i, j) = s_i * phi_j(c_i)                    (ansatz term itself)
/// with s_i = c_i - t0. The residual of u' = lambda u at c_i is then
/// (value - lambda * drift) * w - lambda * u0.
struct CollocationBlocks {
  Eigen::MatrixXd value;
  Eigen::MatrixXd drift;
};

CollocationBlocks assemble_blocks(const RbfBasis& basis, const CollocationGrid& grid);

/// N x M matrix Psi with
///   Psi(j, i) = phi_j(c_i) + s_i phi_j'(c_i) - lambda s_i phi_j(c_i).
/// Throws ArgumentError if basis and grid describe different windows.
Eigen::MatrixXcd assemble_psi(const RbfBasis& basis, const CollocationGrid& grid,
                              std::complex<double> lambda);

/// Scale that keeps eps = alpha_u * h^2 = |lambda|h / (N + |lambda|h + (|lambda|h)^2 + (|lambda|h)^3)
/// at most 1.
double default_alpha_u(double lambda_abs, double h, int n_features);

}  // namespace pirpnn
