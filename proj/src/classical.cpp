#include "pirpnn/classical.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "pirpnn/errors.hpp"

namespace pirpnn {

namespace {

RkScheme make(std::string name, std::initializer_list<double> a, std::initializer_list<double> b,
              std::initializer_list<double> c, int order) {
  const auto s = static_cast<Eigen::Index>(b.size());
  RkScheme out{std::move(name), Eigen::MatrixXd(s, s), Eigen::VectorXd(s), Eigen::VectorXd(s), order};
  auto ia = a.begin();
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) out.butcher_a(i, j) = *ia++;
  auto ib = b.begin();
  auto ic = c.begin();
  for (Eigen::Index i = 0; i < s; ++i) {
    out.butcher_b[i] = *ib++;
    out.butcher_c[i] = *ic++;
  }
  return out;
}

// Stage matrix I - h (butcher_a (x) A) is (s d) x (s d); sparse when A is.
constexpr Eigen::Index kDenseStageLimit = 256;

}  // namespace

namespace schemes {

const RkScheme& backward_euler() {
  static const RkScheme s = make("backward-euler", {1.0}, {1.0}, {1.0}, 1);
  return s;
}

const RkScheme& implicit_midpoint() {
  static const RkScheme s = make("implicit-midpoint", {0.5}, {1.0}, {0.5}, 2);
  return s;
}

const RkScheme& trapezoidal() {
  static const RkScheme s = make("trapezoidal", {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0}, 2);
  return s;
}

const RkScheme& gauss2() {
  static const RkScheme s = [] {
    const double r = std::sqrt(3.0) / 6.0;
    return make("gauss2", {0.25, 0.25 - r, 0.25 + r, 0.25}, {0.5, 0.5}, {0.5 - r, 0.5 + r}, 4);
  }();
  return s;
}

const RkScheme& radau2() {
  static const RkScheme s =
      make("radau2", {5.0 / 12.0, -1.0 / 12.0, 0.75, 0.25}, {0.75, 0.25}, {1.0 / 3.0, 1.0}, 3);
  return s;
}

const RkScheme& radau3() {
  static const RkScheme s = [] {
    const double q = std::sqrt(6.0);
    return make("radau3",
                {(88.0 - 7.0 * q) / 360.0, (296.0 - 169.0 * q) / 1800.0, (-2.0 + 3.0 * q) / 225.0,
                 (296.0 + 169.0 * q) / 1800.0, (88.0 + 7.0 * q) / 360.0, (-2.0 - 3.0 * q) / 225.0,
                 (16.0 - q) / 36.0, (16.0 + q) / 36.0, 1.0 / 9.0},
                {(16.0 - q) / 36.0, (16.0 + q) / 36.0, 1.0 / 9.0}, {(4.0 - q) / 10.0, (4.0 + q) / 10.0, 1.0},
                5);
  }();
  return s;
}

const std::vector<const RkScheme*>& all() {
  static const std::vector<const RkScheme*> list{&backward_euler(), &implicit_midpoint(), &trapezoidal(),
                                                 &gauss2(),         &radau2(),            &radau3()};
  return list;
}

}  // namespace schemes

const RkScheme& scheme_by_name(std::string_view name) {
  for (const RkScheme* s : schemes::all()) {
    if (s->name == name) return *s;
  }
  throw ConfigError("unknown Runge-Kutta scheme: " + std::string(name));
}

std::optional<std::complex<double>> stability_function(const RkScheme& scheme, std::complex<double> z) {
  using Mc = Eigen::MatrixXcd;
  const int s = scheme.stages();
  const Mc a = scheme.butcher_a.cast<std::complex<double>>();
  const Mc ones_bt = Eigen::VectorXcd::Ones(s) * scheme.butcher_b.cast<std::complex<double>>().transpose();
  const Mc id = Mc::Identity(s, s);
  const std::complex<double> den = (id - z * a).determinant();
  const std::complex<double> num = (id - z * a + z * ones_bt).determinant();
  const double scale = std::max(1.0, std::pow(std::abs(z), s));
  if (std::abs(den) <= 1e-14 * scale) return std::nullopt;
  return num / den;
}

std::complex<double> explicit_rk_stability(int order, std::complex<double> z) {
  if (order < 1 || order > 4) throw ArgumentError("explicit RK stability available for orders 1..4");
  std::complex<double> term = 1.0;
  std::complex<double> sum = 1.0;
  for (int k = 1; k <= order; ++k) {
    term *= z / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

Eigen::VectorXd rk_step_linear(const RkScheme& scheme, const Eigen::MatrixXd& a, const Eigen::VectorXd& u,
                               double h) {
  const Eigen::Index d = a.rows();
  if (a.cols() != d || u.size() != d) throw ArgumentError("rk_step_linear: dimension mismatch");
  const int s = scheme.stages();
  // Stages K_i = A (u + h sum_j a_ij K_j):  (I - h a (x) A) K = 1 (x) A u
  Eigen::MatrixXd stage = Eigen::MatrixXd::Identity(s * d, s * d);
  Eigen::VectorXd rhs(s * d);
  const Eigen::VectorXd au = a * u;
  for (int i = 0; i < s; ++i) {
    rhs.segment(i * d, d) = au;
    for (int j = 0; j < s; ++j) stage.block(i * d, j * d, d, d) -= h * scheme.butcher_a(i, j) * a;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stage);
  if (!lu.isInvertible()) throw StepFailure("singular Runge-Kutta stage system");
  const Eigen::VectorXd k = lu.solve(rhs);
  Eigen::VectorXd out = u;
  for (int i = 0; i < s; ++i) out += h * scheme.butcher_b[i] * k.segment(i * d, d);
  return out;
}

Eigen::MatrixXd rk_step_matrix(const RkScheme& scheme, const LinearProblem& problem, double h) {
  problem.validate();
  const Eigen::MatrixXd& a = problem.matrix_a;
  const Eigen::Index d = a.rows();
  const int s = scheme.stages();
  Eigen::MatrixXd rhs(s * d, d);
  for (int i = 0; i < s; ++i) rhs.middleRows(i * d, d) = a;

  Eigen::MatrixXd k;
  if (problem.sparse_a && s * d > kDenseStageLimit) {
    const auto& sa = *problem.sparse_a;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(s * d + s * s * sa.nonZeros()));
    for (Eigen::Index r = 0; r < s * d; ++r) trips.emplace_back(r, r, 1.0);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        const double coef = h * scheme.butcher_a(i, j);
        if (coef == 0.0) continue;
        for (int col = 0; col < sa.outerSize(); ++col) {
          for (Eigen::SparseMatrix<double>::InnerIterator it(sa, col); it; ++it) {
            trips.emplace_back(i * d + it.row(), j * d + it.col(), -coef * it.value());
          }
        }
      }
    }
    Eigen::SparseMatrix<double> stage(s * d, s * d);
    stage.setFromTriplets(trips.begin(), trips.end());
    RidgeSpec exact;
    k = sparse_rank_revealing_solve(stage, rhs, exact);
  } else {
    Eigen::MatrixXd stage = Eigen::MatrixXd::Identity(s * d, s * d);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) stage.block(i * d, j * d, d, d) -= h * scheme.butcher_a(i, j) * a;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stage);
    if (!lu.isInvertible()) throw StepFailure("singular Runge-Kutta stage system");
    k = lu.solve(rhs);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < s; ++i) out += h * scheme.butcher_b[i] * k.middleRows(i * d, d);
  return out;
}

Trajectory rk_integrate(const RkScheme& scheme, const LinearProblem& problem, double h) {
  problem.validate();
  const auto started = std::chrono::steady_clock::now();
  Trajectory traj;
  traj.solver = scheme.name;
  traj.times.push_back(problem.t0);
  traj.states.push_back(problem.u0);
  const std::vector<double> steps = step_sizes(problem.t0, problem.t_end, h);
  std::map<double, Eigen::MatrixXd> cache;
  Eigen::VectorXd u = problem.u0;
  for (std::size_t l = 0; l < steps.size(); ++l) {
    auto it = cache.find(steps[l]);
    if (it == cache.end()) it = cache.emplace(steps[l], rk_step_matrix(scheme, problem, steps[l])).first;
    u = it->second * u;
    traj.times.push_back(l + 1 == steps.size() ? problem.t_end : problem.t0 + static_cast<double>(l + 1) * h);
    traj.states.push_back(u);
  }
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ostringstream os;
  os.precision(17);
  os << "h=" << h;
  traj.config = os.str();
  return traj;
}

}  // namespace pirpnn
