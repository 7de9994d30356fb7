#include "pirpnn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>

#include <omp.h>

#include "pirpnn/classical.hpp"
#include "pirpnn/csv.hpp"
#include "pirpnn/errors.hpp"

namespace pirpnn {

namespace {

using Clock = std::chrono::steady_clock;

bool is_classical(const std::string& solver) {
  for (const RkScheme* s : schemes::all()) {
    if (s->name == solver) return true;
  }
  return false;
}

Eigen::MatrixXd matrix_power(Eigen::MatrixXd base, int exponent) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

// Radau IIA (3 stages) with `substeps` substeps per interval, evaluated on
// the trajectory's own time grid.
double semidiscrete_error(const Trajectory& traj, const LinearProblem& problem, int substeps) {
  const RkScheme& ref = schemes::radau3();
  std::vector<std::pair<double, Eigen::MatrixXd>> cache;
  auto step_for = [&](double dt) -> const Eigen::MatrixXd& {
    for (const auto& [len, mat] : cache) {
      if (len == dt) return mat;
    }
    cache.emplace_back(dt, matrix_power(rk_step_matrix(ref, problem, dt / substeps), substeps));
    return cache.back().second;
  };
  Eigen::VectorXd u = problem.u0;
  double sum = (traj.states.front() - u).squaredNorm();
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    u = step_for(traj.times[k] - traj.times[k - 1]) * u;
    sum += (traj.states[k] - u).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(traj.times.size()));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const std::vector<std::string>& default_solvers() {
  static const std::vector<std::string> names{"pirpnn-m3", "pirpnn-m10",  "backward-euler", "implicit-midpoint",
                                              "trapezoidal", "gauss2", "radau2", "radau3"};
  return names;
}

std::vector<double> default_h_values() {
  std::vector<double> h;
  for (int k = 1; k <= 10; ++k) h.push_back(std::ldexp(1.0, -k));
  return h;
}

bool is_pirpnn_solver(const std::string& solver) {
  return solver == "pirpnn" || solver == "pirpnn-m3" || solver == "pirpnn-m10";
}

void check_solver_name(const std::string& solver) {
  if (!is_pirpnn_solver(solver) && !is_classical(solver)) {
    throw ConfigError("unknown solver '" + solver + "'");
  }
}

StepConfig pirpnn_config(const std::string& solver, double h, const SolverSettings& settings) {
  StepConfig cfg;
  if (solver == "pirpnn-m3") {
    cfg.m_colloc = 3;
    cfg.n_features = 9;
  } else if (solver == "pirpnn-m10") {
    cfg.m_colloc = 10;
    cfg.n_features = 30;
  } else if (solver == "pirpnn") {
    cfg.m_colloc = settings.m_colloc;
    cfg.n_features = settings.n_features;
  } else {
    throw ConfigError("'" + solver + "' is not a PI-RPNN solver");
  }
  cfg.h = h;
  cfg.delta = settings.delta;
  cfg.seed = settings.seed;
  cfg.alpha = settings.alpha;
  cfg.freeze_basis = true;
  cfg.validate();
  return cfg;
}

Trajectory run_solver(const std::string& solver, const LinearProblem& problem, double h,
                      const SolverSettings& settings) {
  check_solver_name(solver);
  if (!(h > 0.0)) throw ConfigError("step size must be positive");
  if (is_pirpnn_solver(solver)) {
    Trajectory traj = step_linear(problem, pirpnn_config(solver, h, settings));
    traj.solver = solver;
    return traj;
  }
  return rk_integrate(scheme_by_name(solver), problem, h);
}

void ExperimentSpec::validate() const {
  if (solvers.empty()) throw ConfigError("no solvers given");
  for (const auto& s : solvers) check_solver_name(s);
  if (h_values.empty()) throw ConfigError("no step sizes given");
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0)) throw ConfigError("step sizes must be positive");
    if (i > 0 && !(h_values[i] < h_values[i - 1])) throw ConfigError("step sizes must be strictly decreasing");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (reference_substeps < 1) throw ConfigError("reference_substeps must be >= 1");
}

double l2_trajectory_error(const Trajectory& traj, const std::function<Eigen::VectorXd(double)>& reference) {
  if (traj.times.empty()) throw ArgumentError("empty trajectory");
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) sum += (traj.states[k] - reference(traj.times[k])).squaredNorm();
  return std::sqrt(sum / static_cast<double>(traj.times.size()));
}

std::vector<ResultRow> run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  const ProblemInstance problem = make_problem(spec.problem, spec.params);
  const std::size_t nh = spec.h_values.size();
  const auto pairs = static_cast<std::int64_t>(spec.solvers.size() * nh);
  std::vector<ResultRow> rows(static_cast<std::size_t>(pairs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(pairs));

  auto accuracy = [&](std::int64_t p) {
    const auto idx = static_cast<std::size_t>(p);
    try {
      ResultRow& row = rows[idx];
      row.solver = spec.solvers[idx / nh];
      row.h = spec.h_values[idx % nh];
      const Trajectory traj = run_solver(row.solver, problem.linear, row.h, spec.settings);
      row.steps = static_cast<int>(traj.times.size()) - 1;
      row.wall_seconds = std::max(traj.wall_time, 1e-9);
      row.l2_error = l2_trajectory_error(traj, problem.reference);
      if (!problem.reference_is_exact) {
        row.l2_error_semidiscrete = semidiscrete_error(traj, problem.linear, spec.reference_substeps);
      }
      if (!std::isfinite(row.l2_error)) {
        throw StepFailure(row.solver + " diverged at h = " + csv::format_double(row.h));
      }
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  if (spec.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t p = 0; p < pairs; ++p) accuracy(p);
  } else {
    for (std::int64_t p = 0; p < pairs; ++p) accuracy(p);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (!spec.timing) return rows;
  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  try {
    for (ResultRow& row : rows) {
      run_solver(row.solver, problem.linear, row.h, spec.settings);
      std::vector<double> times;
      for (int r = 0; r < spec.repetitions; ++r) {
        const auto started = Clock::now();
        run_solver(row.solver, problem.linear, row.h, spec.settings);
        times.push_back(std::chrono::duration<double>(Clock::now() - started).count());
      }
      row.wall_seconds = std::max(median(std::move(times)), 1e-9);
    }
  } catch (...) {
    omp_set_num_threads(saved_threads);
    throw;
  }
  omp_set_num_threads(saved_threads);
  return rows;
}

std::vector<ResultRow> rows_for(const std::vector<ResultRow>& rows, const std::string& solver) {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    if (r.solver == solver) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const ResultRow& a, const ResultRow& b) { return a.h > b.h; });
  return out;
}

double fit_order(const std::vector<ResultRow>& rows, std::optional<double> floor) {
  std::vector<ResultRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const ResultRow& a, const ResultRow& b) { return a.h > b.h; });
  double cutoff = 0.0;
  if (floor) {
    cutoff = 10.0 * *floor;
  } else if (sorted.size() >= 2) {
    const double last = sorted.back().l2_error;
    const double prev = sorted[sorted.size() - 2].l2_error;
    if (!(prev > 1.5 * last)) {
      double lowest = last;
      for (const auto& r : sorted) lowest = std::min(lowest, r.l2_error);
      cutoff = 10.0 * lowest;
    }
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : sorted) {
    if (r.l2_error > 0.0 && r.l2_error >= cutoff && std::isfinite(r.l2_error)) {
      x.push_back(std::log(r.h));
      y.push_back(std::log(r.l2_error));
    }
  }
  if (x.size() < 3) throw InsufficientDataError("order fit needs at least 3 rows above the saturation floor");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  const bool semi = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.l2_error_semidiscrete; });
  os << "solver,h,l2_error,wall_seconds,steps" << (semi ? ",l2_error_semidiscrete" : "") << '\n';
  for (const auto& r : rows) {
    os << csv::escape(r.solver) << ',' << csv::format_double(r.h) << ',' << csv::format_double(r.l2_error) << ','
       << csv::format_double(r.wall_seconds) << ',' << r.steps;
    if (semi) os << ',' << (r.l2_error_semidiscrete ? csv::format_double(*r.l2_error_semidiscrete) : "");
    os << '\n';
  }
}

}  // namespace pirpnn
