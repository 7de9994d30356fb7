#pragma once

// Linear stability of the collocation scheme: per-point stability index,
// Monte-Carlo region scans, the small-eps closed form and a consistency probe.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pirpnn/stepper.hpp"

namespace pirpnn {

/// S_i(z) for i = 1..M with h = 1 and lambda = z (cfg.h is ignored).
Eigen::VectorXcd stability_index(std::complex<double> z, const StepConfig& cfg, std::uint64_t seed);

/// Limit of S at fraction zeta as eps -> 0 then delta -> 0:
///   1 - zeta * (a - 1/z) / (b - c/z + 1/z^2)
/// with a = (1 + 1/M)/2, b = (1 + 3/(2M) + 1/(2M^2))/3, c = 1 + 1/M.
/// Throws ArgumentError at z = 0 (the limit there is 1).
double closed_form_stability_index(double z, double zeta, double m);
std::complex<double> closed_form_stability_index(std::complex<double> z, double zeta, double m);

struct ScanConfig {
  double re_min = -100.0;
  double re_max = 16.0;
  double im_min = -16.0;
  double im_max = 16.0;
  int approx_points_per_axis = 100;
  /// Geometric refinement around anchors: anchor +/- spacing * ratio^k, k = 1..levels.
  double refine_ratio = 0.7;
  int refine_levels = 12;
  bool refine_near_zero = true;
  bool refine_near_boundary = true;
  int mc_runs = 200;
  int m_colloc = 10;
  /// 0 selects 3 * m_colloc.
  int n_features = 0;
  double delta = 1e-8;
  AlphaPolicy alpha;

  void validate() const;
  StepConfig step_config() const;
};

struct StabilityScan {
  std::vector<std::complex<double>> mesh;
  /// max over Monte-Carlo runs of |S_M| per cell; +inf where a solve failed.
  std::vector<double> max_abs_s;
  std::vector<int> flag;
  std::uint64_t base_seed = 0;
  int mc_runs = 0;
};

/// Seed of Monte-Carlo run `run` in mesh cell `cell`.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t cell, int run);

/// Per-axis coordinates: coarse uniform grid plus geometric refinements
/// around each anchor, clipped to [lo, hi], sorted and de-duplicated. The
/// coarse grid (and, failing that, the refinement depth) shrinks until the
/// axis holds at most approx_points values.
std::vector<double> refined_axis(double lo, double hi, int approx_points, const std::vector<double>& anchors,
                                 double ratio, int levels);

/// Point on the positive real axis where the index crosses |S| = 1 from the
/// unstable side (0 if none within (0, limit]).
double detect_real_crossing(const StepConfig& cfg, double limit, std::uint64_t seed);
/// Height above Re z = re where |S| drops back below 1 (0 if none within limit).
double detect_imag_crossing(const StepConfig& cfg, double re, double limit, std::uint64_t seed);

/// Tensor mesh per the config (real axis outer, imaginary axis inner).
std::vector<std::complex<double>> build_scan_mesh(const ScanConfig& cfg, std::uint64_t base_seed);

/// Monte-Carlo maxima over an explicit mesh. The OpenMP version parallelizes
/// over cells; both produce bit-identical results.
StabilityScan scan_points(const std::vector<std::complex<double>>& mesh, const ScanConfig& cfg,
                          std::uint64_t base_seed);
StabilityScan scan_points_serial(const std::vector<std::complex<double>>& mesh, const ScanConfig& cfg,
                                 std::uint64_t base_seed);

StabilityScan scan_region(const ScanConfig& cfg, std::uint64_t base_seed);

struct ConsistencyRow {
  double h = 0.0;
  double local_error = 0.0;
  double error_over_h = 0.0;
  /// A(h) = 1 - Phi_M^T (Psi Psi^T + delta I)^{-1} Psi 1
  double a_h = 0.0;
  /// delta / (M N + delta)
  double a0 = 0.0;
};

std::vector<ConsistencyRow> consistency_probe(double lambda, const StepConfig& cfg,
                                              const std::vector<double>& h_values);

}  // namespace pirpnn
