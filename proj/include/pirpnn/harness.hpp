#pragma once

// Convergence and timing experiments over the PI-RPNN presets and the
// classical comparators.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pirpnn/problems.hpp"
#include "pirpnn/stepper.hpp"

namespace pirpnn {

/// "pirpnn-m3" (M = 3, N = 9), "pirpnn-m10" (M = 10, N = 30), then the six classical schemes.
const std::vector<std::string>& default_solvers();

/// h = 2^-k, k = 1..10.
std::vector<double> default_h_values();

struct SolverSettings {
  /// 0 selects the truncated-SVD pseudoinverse.
  double delta = 0.0;
  std::uint64_t seed = 0;
  AlphaPolicy alpha;
  /// Used by the plain "pirpnn" solver name.
  int m_colloc = 3;
  int n_features = 0;
};

/// Step configuration of a PI-RPNN solver name; throws ConfigError for non-PI-RPNN names.
StepConfig pirpnn_config(const std::string& solver, double h, const SolverSettings& settings);
bool is_pirpnn_solver(const std::string& solver);
void check_solver_name(const std::string& solver);

/// Integrates a problem with any registered solver at step h.
Trajectory run_solver(const std::string& solver, const LinearProblem& problem, double h,
                      const SolverSettings& settings = {});

struct ExperimentSpec {
  std::string problem = "example1";
  ProblemParams params;
  std::vector<std::string> solvers = default_solvers();
  std::vector<double> h_values = default_h_values();
  /// Timed repetitions after one discarded warm-up run; at least 5 for reported timings.
  int repetitions = 5;
  SolverSettings settings;
  /// Substeps per h of the radau3 semi-discrete reference (diffreac only).
  int reference_substeps = 64;
  /// When false, wall_seconds is the accuracy run's own time and no repetitions are made.
  bool timing = true;
  /// Evaluate accuracy runs in parallel over (solver, h) pairs.
  bool parallel = true;

  void validate() const;
};

struct ResultRow {
  std::string solver;
  double h = 0.0;
  double l2_error = 0.0;
  double wall_seconds = 0.0;
  int steps = 0;
  /// Error against the semi-discrete reference; set only when the main reference is not exact.
  std::optional<double> l2_error_semidiscrete;
};

/// sqrt(sum_k ||u_k - ref(t_k)||^2 / #grid) over the trajectory's own time grid.
double l2_trajectory_error(const Trajectory& traj, const std::function<Eigen::VectorXd(double)>& reference);

std::vector<ResultRow> run_convergence(const ExperimentSpec& spec);

/// Least-squares slope of log(error) against log(h). Rows whose error is
/// below 10x the floor are dropped; without an explicit floor one is taken
/// as the smallest error when the tail stops decreasing (halving h gains
/// less than a factor 1.5), else no rows are dropped.
/// Throws InsufficientDataError with fewer than 3 usable rows.
double fit_order(const std::vector<ResultRow>& rows, std::optional<double> floor = std::nullopt);

std::vector<ResultRow> rows_for(const std::vector<ResultRow>& rows, const std::string& solver);

/// Header `solver,h,l2_error,wall_seconds,steps` (plus `l2_error_semidiscrete` when present).
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

}  // namespace pirpnn
