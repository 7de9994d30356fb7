#include "pirpnn/basis.hpp"

#include <cmath>

#include "pirpnn/errors.hpp"
#include "pirpnn/rng.hpp"

namespace pirpnn {

namespace {

constexpr double kWindowTolerance = 1e-12;

bool same_window(const RbfBasis& basis, const CollocationGrid& grid) {
  const double scale = 1.0 + std::abs(basis.window_start) + basis.window_len;
  return std::abs(basis.window_start - grid.window_start) <= kWindowTolerance * scale &&
         std::abs(basis.window_len - grid.window_len) <= kWindowTolerance * scale;
}

}  // namespace

RbfBasis RbfBasis::with_alpha(double alpha) const {
  if (!(alpha >= 0.0)) throw ArgumentError("alpha_u must be nonnegative");
  RbfBasis out = *this;
  out.alpha_u = alpha;
  return out;
}

RbfBasis RbfBasis::shifted(double start) const {
  RbfBasis out = *this;
  out.window_start = start;
  return out;
}

CollocationGrid CollocationGrid::equispaced(int m, double window_start, double window_len) {
  if (m < 1) throw ArgumentError("collocation grid needs at least one point");
  if (!(window_len > 0.0)) throw ArgumentError("window length must be positive");
  CollocationGrid grid;
  grid.n_points = m;
  grid.window_start = window_start;
  grid.window_len = window_len;
  grid.fractions.resize(m);
  for (int i = 0; i < m; ++i) grid.fractions[i] = static_cast<double>(i + 1) / m;
  grid.fractions.back() = 1.0;
  return grid;
}

RbfBasis sample_basis(int n_features, double alpha_u, double window_start, double window_len,
                      std::uint64_t seed) {
  if (n_features < 1) throw ArgumentError("n_features must be positive");
  if (!(window_len > 0.0)) throw ArgumentError("window length must be positive");
  if (!(alpha_u >= 0.0)) throw ArgumentError("alpha_u must be nonnegative");

  RbfBasis basis;
  basis.n_features = n_features;
  basis.alpha_u = alpha_u;
  basis.window_start = window_start;
  basis.window_len = window_len;
  basis.seed = seed;
  basis.thetas.resize(n_features);
  basis.center_fractions.resize(n_features);
  for (int j = 0; j < n_features; ++j) {
    basis.thetas[j] = rng::uniform01(seed, static_cast<std::uint64_t>(j));
    basis.center_fractions[j] = static_cast<double>(j + 1) / n_features;
  }
  return basis;
}

Eigen::VectorXd eval_features(const RbfBasis& basis, double t) {
  Eigen::VectorXd out(basis.n_features);
  for (int j = 0; j < basis.n_features; ++j) {
    const double d = t - basis.center(j);
    out[j] = std::exp(-basis.alpha_u * basis.thetas[j] * d * d);
  }
  return out;
}

Eigen::VectorXd eval_feature_derivs(const RbfBasis& basis, double t) {
  Eigen::VectorXd out(basis.n_features);
  for (int j = 0; j < basis.n_features; ++j) {
    const double d = t - basis.center(j);
    const double k = basis.alpha_u * basis.thetas[j];
    out[j] = -2.0 * k * d * std::exp(-k * d * d);
  }
  return out;
}

CollocationBlocks assemble_blocks(const RbfBasis& basis, const CollocationGrid& grid) {
  if (!same_window(basis, grid)) throw ArgumentError("basis and collocation grid windows differ");
  const int m = grid.n_points;
  const int n = basis.n_features;
  CollocationBlocks blocks{Eigen::MatrixXd(m, n), Eigen::MatrixXd(m, n)};
  for (int i = 0; i < m; ++i) {
    const double s = grid.fractions[i] * grid.window_len;
    const double c = grid.window_start + s;
    for (int j = 0; j < n; ++j) {
      const double d = c - basis.center(j);
      const double k = basis.alpha_u * basis.thetas[j];
      const double phi = std::exp(-k * d * d);
      const double dphi = -2.0 * k * d * phi;
      blocks.value(i, j) = phi + s * dphi;
      blocks.drift(i, j) = s * phi;
    }
  }
  return blocks;
}

Eigen::MatrixXcd assemble_psi(const RbfBasis& basis, const CollocationGrid& grid,
                              std::complex<double> lambda) {
  const CollocationBlocks blocks = assemble_blocks(basis, grid);
  Eigen::MatrixXcd psi(basis.n_features, grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    for (int j = 0; j < basis.n_features; ++j) {
      // Keep the imaginary part exactly zero for real lambda.
      const double re = blocks.value(i, j) - lambda.real() * blocks.drift(i, j);
      const double im = -lambda.imag() * blocks.drift(i, j);
      psi(j, i) = {re, im};
    }
  }
  return psi;
}

double default_alpha_u(double lambda_abs, double h, int n_features) {
  if (!(h > 0.0)) throw ArgumentError("step size must be positive");
  if (n_features < 1) throw ArgumentError("n_features must be positive");
  if (!(lambda_abs >= 0.0)) throw ArgumentError("|lambda| must be nonnegative");
  if (lambda_abs == 0.0) return 0.0;
  const double x = lambda_abs * h;
  return (lambda_abs / h) / (n_features + x + x * x + x * x * x);
}

}  // namespace pirpnn
