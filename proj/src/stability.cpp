#include "pirpnn/stability.hpp"

#include <cmath>

#include "pirpnn/errors.hpp"

namespace pirpnn {

Eigen::VectorXcd stability_index(std::complex<double> z, const StepConfig& cfg, std::uint64_t seed) {
  StepConfig unit = cfg;
  unit.h = 1.0;
  const int n = unit.features();
  const RbfBasis basis = sample_basis(n, unit.alpha.resolve(std::abs(z), 1.0, n), 0.0, 1.0, seed);
  return build_scalar_step(z, unit, basis).map;
}

std::complex<double> closed_form_stability_index(std::complex<double> z, double zeta, double m) {
  if (z == 0.0) throw ArgumentError("closed form undefined at z = 0 (limit is 1)");
  if (!(m >= 1.0)) throw ArgumentError("M must be >= 1");
  const std::complex<double> s = 1.0 / z;
  const double a = 0.5 * (1.0 + 1.0 / m);
  const double b = (1.0 + 1.5 / m + 0.5 / (m * m)) / 3.0;
  const double c = 1.0 + 1.0 / m;
  return 1.0 - zeta * (a - s) / (b - c * s + s * s);
}

double closed_form_stability_index(double z, double zeta, double m) {
  return closed_form_stability_index(std::complex<double>(z, 0.0), zeta, m).real();
}

std::vector<ConsistencyRow> consistency_probe(double lambda, const StepConfig& cfg,
                                              const std::vector<double>& h_values) {
  cfg.validate();
  std::vector<ConsistencyRow> rows;
  rows.reserve(h_values.size());
  const int n = cfg.features();
  const int m = cfg.m_colloc;
  for (double h : h_values) {
    StepConfig local = cfg;
    local.h = h;
    const RbfBasis basis = make_window_basis(local, std::abs(lambda), h, 0.0, 0);
    const StepOperator op = build_scalar_step(lambda, local, basis);
    ConsistencyRow row;
    row.h = h;
    row.local_error = std::abs(std::exp(lambda * h) - op.endpoint());
    row.error_over_h = row.local_error / h;
    const Eigen::VectorXd phi_end = eval_features(basis, op.grid.point(m - 1));
    row.a_h = 1.0 - phi_end.dot(op.weights.real());
    row.a0 = cfg.delta / (static_cast<double>(m) * n + cfg.delta);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pirpnn
