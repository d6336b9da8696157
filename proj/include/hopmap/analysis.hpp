// Copyright 2026 The hopmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Numerical dynamics analysis that works on either representation of the
// hop-to-hop energy map: the closed-form massless-foot map or the simulated
// finite-foot-mass map.

#ifndef HOPMAP_ANALYSIS_HPP_
#define HOPMAP_ANALYSIS_HPP_

#include <functional>
#include <string_view>
#include <vector>

#include "hopmap/sim.hpp"
#include "hopmap/types.hpp"

namespace hopmap::analysis {

struct MapEval {
  // Energy at the next touchdown, extended continuously below zero for
  // hops that cannot clear the crater.
  double value = 0.0;
  // Failure signal: value < 0 or a failed simulated hop.
  bool failed = false;
};

/// A deterministic evaluatable hop-to-hop map with a failure signal.
class MapFunction {
 public:
  static MapFunction closed_form(const ModelParams& params);
  static MapFunction simulated(const ModelParams& params,
                               const sim::SimConfig& config);

  MapEval operator()(double eps_td) const { return fn_(eps_td); }
  bool is_closed_form() const { return closed_form_; }
  const ModelParams& params() const { return params_; }
  const sim::SimConfig& config() const { return config_; }

 private:
  MapFunction() = default;
  std::function<MapEval(double)> fn_;
  ModelParams params_;
  sim::SimConfig config_;
  bool closed_form_ = true;
};

/// Root of P(eps) - eps on the given bracket, located to 1e-9. Throws
/// NoGaitError when no sign change exists on the bracket.
double numeric_fixed_point(const MapFunction& map, double lo, double hi);

/// As above with an automatic bracket seeded by the closed-form fixed point
/// when one exists.
double numeric_fixed_point(const MapFunction& map);

/// Richardson-refined central finite difference of the map at eps_star.
/// step <= 0 selects the default 1e-4 * max(1, eps_star).
double numeric_eigenvalue(const MapFunction& map, double eps_star,
                          double step = 0.0);

enum class PeriodKind { kPeriodic, kAperiodic, kFailed };

struct OrbitRecord {
  PeriodKind kind = PeriodKind::kFailed;
  // Minimal period when kind == kPeriodic.
  int period = 0;
  // Post-transient iterates (empty only if the transient already failed).
  std::vector<double> samples;
};

/// Iterates the map from eps0, discards `transient` iterates, collects
/// `n_samples` more and detects the minimal cycle length up to
/// n_samples / 4 by cycle matching within the relative tolerance.
OrbitRecord iterate_and_detect_period(const MapFunction& map, double eps0,
                                      int transient, int n_samples,
                                      double tol);

struct ScanOptions {
  int transient = 500;
  int samples = 256;
  double cluster_tol = 1e-5;
  int workers = 1;
};

struct BifurcationRecord {
  double param_value = 0.0;
  OrbitRecord orbit;
  // True when at least one seed produced a non-failed orbit.
  bool viable = false;
  // Period-one branch located independently of the attractor iteration;
  // unstable branches are reported too.
  bool fp_exists = false;
  double fp_eps = 0.0;
  double fp_lambda = 0.0;
  bool fp_stable = false;
};

/// Applies set_model_param on a copy of `base` for every grid value, runs
/// the attractor iteration from the seeds {0.5, 2} x (closed-form fixed
/// point guess) and 1e-3, and locates the period-one branch. Grid cells are
/// independent; `options.workers` threads may process them, and the output
/// order always follows the grid.
std::vector<BifurcationRecord> bifurcation_scan(
    const ModelParams& base, bool closed_form, const sim::SimConfig& config,
    std::string_view sweep_param, const std::vector<double>& grid,
    const ScanOptions& options);

enum class BasinClass { kGlobal, kBanded, kUnstable };

struct BasinBand {
  double lo = 0.0;
  double hi = 0.0;
  // Number of map applications that send this band into the failure
  // interval.
  int depth = 0;
};

struct BasinReport {
  BasinClass classification = BasinClass::kGlobal;
  double eps_star = 0.0;
  double lambda = 0.0;
  // Interval where the map is negative; present only for banded basins.
  bool has_a0 = false;
  double a0_lo = 0.0;
  double a0_hi = 0.0;
  // Disjoint, sorted preimage bands attracted to the failure interval.
  std::vector<BasinBand> bands;
  int depth_reached = 0;
  // Location and value of the map minimum.
  double min_eps = 0.0;
  double min_value = 0.0;
};

/// Classifies the basin of attraction of the period-one fixed point.
///
/// Global when the eigenvalue is nonnegative, or when the map minimum is
/// positive and |eigenvalue| < 1; Unstable when |eigenvalue| >= 1.
/// Otherwise banded: the failure interval A0 = {P < 0} is bracketed and its
/// preimages are peeled off branch by branch (the map is decreasing then
/// increasing, so each preimage of an interval is at most two intervals)
/// down to `preimage_depth` or until bands become narrower than
/// `resolution`.
BasinReport classify_basin(const MapFunction& map, int preimage_depth = 12,
                           double resolution = 1e-6);

struct SurfaceCell {
  double phi = 0.0;
  double kappa_c = 0.0;
  // False when no injected energy reproduces the requested fixed point.
  bool exists = false;
  double eps_inj = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  bool stable = false;
};

/// Injected energy that places the closed-form fixed point at eps_star for
/// one (phi, kappa_c) cell, with the metrics of the resulting gait. For
/// phi <= 1 the inversion is closed-form: eps_inj = (1+sqrt(1+2 k_eq eps*))^2/2.
SurfaceCell constant_fixed_point_cell(double eps_star, double phi,
                                      double kappa_c);

/// Evaluates constant_fixed_point_cell over a (phi, kappa_c) grid;
/// row-major over phi first. Cells without solutions are marked absent.
std::vector<SurfaceCell> constant_fixed_point_surface(
    double eps_star, const std::vector<double>& phi_grid,
    const std::vector<double>& kappa_grid, int workers = 1);

struct CurvePoint {
  double kappa_c = 0.0;
  bool exists = false;
  double phi = 0.0;
  double eps_inj = 0.0;
  // Self-verification residuals of the returned point.
  double fixed_point_error = 0.0;
  double lambda_error = 0.0;
};

/// For each kappa_c, the force ratio (and injected energy) that pins the
/// fixed point at eps_star with eigenvalue lambda_target. Points are absent
/// where the target eigenvalue is unreachable.
std::vector<CurvePoint> constant_eigenvalue_curve(
    double eps_star, double lambda_target,
    const std::vector<double>& kappa_grid, int workers = 1);

}  // namespace hopmap::analysis

#endif  // HOPMAP_ANALYSIS_HPP_
