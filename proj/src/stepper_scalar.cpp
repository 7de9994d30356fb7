#include <cmath>
#include <sstream>

#include "pirpnn/errors.hpp"
#include "pirpnn/rng.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn {

double AlphaPolicy::resolve(double lambda_abs, double h, int n_features) const {
  if (kind == Kind::Fixed) return value;
  return default_alpha_u(lambda_abs, h, n_features);
}

std::string AlphaPolicy::describe() const {
  if (kind == Kind::DefaultFormula) return "default";
  std::ostringstream os;
  os.precision(17);
  os << "fixed:" << value;
  return os.str();
}

void StepConfig::validate() const {
  if (m_colloc < 1) throw ArgumentError("m_colloc must be positive");
  if (n_features < 0) throw ArgumentError("n_features must be nonnegative (0 = 3M)");
  if (!(delta >= 0.0)) throw ArgumentError("delta must be nonnegative");
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("step size must be positive");
  if (alpha.kind == AlphaPolicy::Kind::Fixed && !(alpha.value >= 0.0)) {
    throw ArgumentError("fixed alpha_u must be nonnegative");
  }
}

RidgeSpec StepConfig::ridge() const {
  RidgeSpec spec;
  spec.delta = delta;
  return spec;
}

std::uint64_t StepConfig::window_seed(std::int64_t window) const {
  if (freeze_basis) return seed;
  return rng::derive(seed, static_cast<std::uint64_t>(window));
}

std::string StepConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "M=" << m_colloc << " N=" << features() << " delta=" << delta << " h=" << h
     << " alpha=" << alpha.describe() << " seed=" << seed << " freeze=" << (freeze_basis ? 1 : 0);
  return os.str();
}

std::vector<double> step_sizes(double t0, double t_end, double h) {
  if (!(t_end > t0)) throw ArgumentError("t_end must exceed t0");
  if (!(h > 0.0)) throw ArgumentError("step size must be positive");
  const double span = t_end - t0;
  const double ratio = span / h;
  auto full = static_cast<std::int64_t>(std::floor(ratio));
  double rest = span - static_cast<double>(full) * h;
  // Treat a remainder at rounding level as an exact multiple.
  if (rest <= 1e-9 * h) {
    rest = 0.0;
  } else if (h - rest <= 1e-9 * h) {
    ++full;
    rest = 0.0;
  }
  std::vector<double> out(static_cast<std::size_t>(full), h);
  if (rest > 0.0) out.push_back(rest);
  return out;
}

RbfBasis make_window_basis(const StepConfig& cfg, double lambda_abs, double h, double window_start,
                           std::int64_t window) {
  const int n = cfg.features();
  return sample_basis(n, cfg.alpha.resolve(lambda_abs, h, n), window_start, h, cfg.window_seed(window));
}

std::complex<double> StepOperator::multiplier_at(double fraction) const {
  const Eigen::VectorXd phi = eval_features(*basis, basis->window_start + fraction * h);
  return 1.0 + lambda * h * fraction * phi.cast<std::complex<double>>().dot(weights);
}

StepOperator build_scalar_step(std::complex<double> lambda, const StepConfig& cfg, const RbfBasis& basis) {
  cfg.validate();
  const double h = basis.window_len;
  if (std::abs(h - cfg.h) > 1e-12 * cfg.h) {
    throw ArgumentError("build_scalar_step: basis window length differs from cfg.h");
  }
  StepOperator op;
  op.grid = CollocationGrid::equispaced(cfg.m_colloc, basis.window_start, h);
  op.basis = std::make_shared<const RbfBasis>(basis);
  op.lambda = lambda;
  op.h = h;
  op.eval_fractions = op.grid.fractions;

  const CollocationBlocks blocks = assemble_blocks(basis, op.grid);
  const int m = op.grid.n_points;
  if (lambda.imag() == 0.0) {
    const Eigen::MatrixXd a = blocks.value - lambda.real() * blocks.drift;
    const Eigen::VectorXd w = ridge_solve(a, Eigen::MatrixXd::Ones(m, 1), cfg.ridge());
    op.weights = w.cast<std::complex<double>>();
  } else {
    const Eigen::MatrixXcd a =
        blocks.value.cast<std::complex<double>>() - lambda * blocks.drift.cast<std::complex<double>>();
    op.weights = ridge_solve(a, Eigen::MatrixXcd::Ones(m, 1), cfg.ridge());
  }

  op.map.resize(m);
  for (int i = 0; i < m; ++i) {
    const double zeta = op.grid.fractions[i];
    const Eigen::VectorXd phi = eval_features(basis, op.grid.point(i));
    std::complex<double> dot = 0.0;
    for (int j = 0; j < basis.n_features; ++j) dot += phi[j] * op.weights[j];
    op.map[i] = 1.0 + lambda * h * zeta * dot;
  }
  return op;
}

}  // namespace pirpnn
