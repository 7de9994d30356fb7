#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library, so agreement with library output is a real cross-check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// exp(A t) u by a scaled Taylor series with repeated squaring.
inline Eigen::VectorXd series_expm_apply(const Eigen::MatrixXd& a, double t, const Eigen::VectorXd& u) {
  const double norm = (a * t).cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Eigen::MatrixXd b = a * (t / std::ldexp(1.0, squarings));
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum * u;
}

/// (A^T A + delta I)^{-1} A^T B by Gaussian elimination with partial pivoting on the normal equations.
inline Eigen::MatrixXd normal_equations(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double delta) {
  Eigen::MatrixXd g = a.transpose() * a;
  g.diagonal().array() += delta;
  return g.partialPivLu().solve(a.transpose() * b);
}

/// Central difference of a scalar function.
template <class F>
double central_diff(F&& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Stability functions of the comparators written out as rational functions.
inline std::complex<double> r_backward_euler(std::complex<double> z) { return 1.0 / (1.0 - z); }
inline std::complex<double> r_trapezoidal(std::complex<double> z) { return (1.0 + z / 2.0) / (1.0 - z / 2.0); }
inline std::complex<double> r_gauss2(std::complex<double> z) {
  return (1.0 + z / 2.0 + z * z / 12.0) / (1.0 - z / 2.0 + z * z / 12.0);
}
inline std::complex<double> r_radau2(std::complex<double> z) {
  return (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
}
inline std::complex<double> r_radau3(std::complex<double> z) {
  return (1.0 + 2.0 * z / 5.0 + z * z / 20.0) / (1.0 - 3.0 * z / 5.0 + 3.0 * z * z / 20.0 - z * z * z / 60.0);
}

/// Limit index from the rank-one expansion, written independently of the library:
/// S = 1 - zeta * (A - 1/z) / (B - C/z + 1/z^2).
inline double limit_index(double z, double zeta, double m) {
  const double s = 1.0 / z;
  const double num = 0.5 * (1.0 + 1.0 / m) - s;
  const double den = (1.0 + 1.5 / m + 0.5 / (m * m)) / 3.0 - s * (1.0 + 1.0 / m) + s * s;
  return 1.0 - zeta * num / den;
}

/// Analytic field of the diffusion-reaction benchmark.
inline double diffreac_field(double t, double x, double nu, double lam, double a, double c) {
  return a * std::exp(-(4.0 * nu + lam) * t) * std::cos(2.0 * x) + c * std::exp(-lam * t);
}

}  // namespace oracle
