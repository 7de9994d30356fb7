#include <algorithm>
#include <cmath>
#include <limits>

#include "pirpnn/errors.hpp"
#include "pirpnn/rng.hpp"
#include "pirpnn/stability.hpp"

namespace pirpnn {

namespace {

constexpr std::uint64_t kBoundaryProbeStream = 0xb0b0u;
constexpr int kBoundaryProbeSeeds = 5;
constexpr int kBisectionSteps = 48;

double endpoint_max(std::complex<double> z, const StepConfig& cfg, std::uint64_t seed, int runs) {
  double worst = 0.0;
  for (int r = 0; r < runs; ++r) {
    const Eigen::VectorXcd s = stability_index(z, cfg, rng::derive(seed, static_cast<std::uint64_t>(r)));
    worst = std::max(worst, std::abs(s[s.size() - 1]));
  }
  return worst;
}

// First point of [lo, hi] along `path` where the predicate "unstable" switches
// off, located by scanning `samples` points and bisecting the bracketing pair.
template <class Path>
double locate_switch_off(const Path& path, double lo, double hi, int samples, const StepConfig& cfg,
                         std::uint64_t seed) {
  auto unstable = [&](double x) { return endpoint_max(path(x), cfg, seed, kBoundaryProbeSeeds) > 1.0; };
  double prev = lo;
  bool prev_unstable = unstable(lo);
  for (int k = 1; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / samples;
    const bool now = unstable(x);
    if (prev_unstable && !now) {
      double a = prev;
      double b = x;
      for (int it = 0; it < kBisectionSteps; ++it) {
        const double mid = 0.5 * (a + b);
        (unstable(mid) ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    prev = x;
    prev_unstable = now;
  }
  return 0.0;
}

StepConfig index_config(const ScanConfig& cfg) { return cfg.step_config(); }

}  // namespace

void ScanConfig::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max)) throw ArgumentError("scan ranges must be ordered");
  if (approx_points_per_axis < 2) throw ArgumentError("approx_points_per_axis must be >= 2");
  if (!(refine_ratio > 0.0 && refine_ratio < 1.0)) throw ArgumentError("refine_ratio must lie in (0, 1)");
  if (refine_levels < 0) throw ArgumentError("refine_levels must be >= 0");
  if (mc_runs < 1) throw ArgumentError("mc_runs must be >= 1");
  step_config().validate();
}

StepConfig ScanConfig::step_config() const {
  StepConfig c;
  c.m_colloc = m_colloc;
  c.n_features = n_features;
  c.delta = delta;
  c.h = 1.0;
  c.alpha = alpha;
  return c;
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t cell, int run) {
  return rng::derive(base_seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(run));
}

namespace {

std::vector<double> axis_with_coarse(double lo, double hi, int coarse, const std::vector<double>& anchors,
                                     double ratio, int levels) {
  const double spacing = (hi - lo) / (coarse - 1);
  std::vector<double> pts;
  for (int k = 0; k < coarse; ++k) pts.push_back(k + 1 == coarse ? hi : lo + spacing * k);
  auto keep = [&](double x) {
    if (x >= lo && x <= hi) pts.push_back(x);
  };
  for (double a : anchors) {
    keep(a);
    double offset = spacing;
    for (int k = 1; k <= levels; ++k) {
      offset *= ratio;
      keep(a - offset);
      keep(a + offset);
    }
  }
  std::sort(pts.begin(), pts.end());
  const double tol = 1e-12 * std::max(std::abs(lo), std::abs(hi));
  std::vector<double> out;
  for (double x : pts) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<double> refined_axis(double lo, double hi, int approx_points, const std::vector<double>& anchors,
                                 double ratio, int levels) {
  if (!(lo < hi)) throw ArgumentError("axis bounds must satisfy lo < hi");
  if (approx_points < 2) throw ArgumentError("an axis needs at least 2 points");
  // Largest coarse grid whose union with the refinements stays within the
  // point budget. Refinement depth is reduced when even the smallest coarse
  // grid does not fit.
  const int min_coarse = std::min(approx_points, 10);
  for (int depth = std::max(levels, 0); depth >= 0; --depth) {
    for (int coarse = approx_points; coarse >= min_coarse; --coarse) {
      auto axis = axis_with_coarse(lo, hi, coarse, anchors, ratio, depth);
      if (static_cast<int>(axis.size()) <= approx_points) return axis;
    }
  }
  return axis_with_coarse(lo, hi, min_coarse, anchors, ratio, 0);
}

double detect_real_crossing(const StepConfig& cfg, double limit, std::uint64_t seed) {
  if (!(limit > 0.0)) return 0.0;
  const double start = std::min(1e-3, 0.5 * limit);
  return locate_switch_off([](double x) { return std::complex<double>(x, 0.0); }, start, limit, 64, cfg, seed);
}

double detect_imag_crossing(const StepConfig& cfg, double re, double limit, std::uint64_t seed) {
  if (!(limit > 0.0)) return 0.0;
  return locate_switch_off([re](double y) { return std::complex<double>(re, y); }, 0.0, limit, 64, cfg, seed);
}

std::vector<std::complex<double>> build_scan_mesh(const ScanConfig& cfg, std::uint64_t base_seed) {
  cfg.validate();
  std::vector<double> re_anchors;
  std::vector<double> im_anchors;
  if (cfg.refine_near_zero) {
    re_anchors.push_back(0.0);
    im_anchors.push_back(0.0);
  }
  if (cfg.refine_near_boundary) {
    const StepConfig sc = index_config(cfg);
    const std::uint64_t probe = rng::derive(base_seed, kBoundaryProbeStream);
    const double x_star = detect_real_crossing(sc, std::max(cfg.re_max, 16.0), probe);
    if (x_star > 0.0) {
      re_anchors.push_back(x_star);
      const double y_star =
          detect_imag_crossing(sc, 0.5 * x_star, std::max({std::abs(cfg.im_min), std::abs(cfg.im_max), 16.0}), probe);
      if (y_star > 0.0) {
        im_anchors.push_back(y_star);
        im_anchors.push_back(-y_star);
      }
    }
  }
  const auto re = refined_axis(cfg.re_min, cfg.re_max, cfg.approx_points_per_axis, re_anchors, cfg.refine_ratio,
                               cfg.refine_levels);
  const auto im = refined_axis(cfg.im_min, cfg.im_max, cfg.approx_points_per_axis, im_anchors, cfg.refine_ratio,
                               cfg.refine_levels);
  std::vector<std::complex<double>> mesh;
  mesh.reserve(re.size() * im.size());
  for (double x : re)
    for (double y : im) mesh.emplace_back(x, y);
  return mesh;
}

namespace {

void evaluate_cell(const std::vector<std::complex<double>>& mesh, const StepConfig& sc, int runs,
                   std::uint64_t base_seed, std::size_t cell, StabilityScan& out) {
  double worst = 0.0;
  int flag = 0;
  try {
    for (int r = 0; r < runs; ++r) {
      const Eigen::VectorXcd s = stability_index(mesh[cell], sc, cell_seed(base_seed, cell, r));
      const double v = std::abs(s[s.size() - 1]);
      if (!std::isfinite(v)) {
        worst = std::numeric_limits<double>::infinity();
        flag = 1;
        break;
      }
      worst = std::max(worst, v);
    }
  } catch (const std::exception&) {
    worst = std::numeric_limits<double>::infinity();
    flag = 1;
  }
  out.max_abs_s[cell] = worst;
  out.flag[cell] = flag;
}

StabilityScan prepare(const std::vector<std::complex<double>>& mesh, const ScanConfig& cfg,
                      std::uint64_t base_seed) {
  cfg.validate();
  StabilityScan scan;
  scan.mesh = mesh;
  scan.max_abs_s.assign(mesh.size(), 0.0);
  scan.flag.assign(mesh.size(), 0);
  scan.base_seed = base_seed;
  scan.mc_runs = cfg.mc_runs;
  return scan;
}

}  // namespace

StabilityScan scan_points_serial(const std::vector<std::complex<double>>& mesh, const ScanConfig& cfg,
                                 std::uint64_t base_seed) {
  StabilityScan scan = prepare(mesh, cfg, base_seed);
  const StepConfig sc = index_config(cfg);
  for (std::size_t c = 0; c < mesh.size(); ++c) evaluate_cell(mesh, sc, cfg.mc_runs, base_seed, c, scan);
  return scan;
}

StabilityScan scan_points(const std::vector<std::complex<double>>& mesh, const ScanConfig& cfg,
                          std::uint64_t base_seed) {
  StabilityScan scan = prepare(mesh, cfg, base_seed);
  const StepConfig sc = index_config(cfg);
  const auto n = static_cast<std::int64_t>(mesh.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t c = 0; c < n; ++c)
    evaluate_cell(mesh, sc, cfg.mc_runs, base_seed, static_cast<std::size_t>(c), scan);
  return scan;
}

StabilityScan scan_region(const ScanConfig& cfg, std::uint64_t base_seed) {
  return scan_points(build_scan_mesh(cfg, base_seed), cfg, base_seed);
}

}  // namespace pirpnn
