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

#include "hopmap/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hopmap/massless.hpp"
#include "hopmap/model.hpp"
#include "rootfind.hpp"

namespace hopmap::analysis {

namespace {

// Index-ordered parallel loop: results must be written by index so that the
// output never depends on scheduling.
template <typename F>
void parallel_for(int n, int workers, const F& body) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double identity_gap(const MapFunction& map, double eps) {
  return map(eps).value - eps;
}

// Fixed point of the parameter set's closed-form map, used only to seed
// brackets; callers fall back to a unit guess when no gait exists.
double closed_form_guess(const ModelParams& params) {
  try {
    return massless::fixed_point(params);
  } catch (const std::exception&) {
    return 1.0;
  }
}

struct Interval {
  double lo;
  double hi;
};

// Minimum of the map by coarse grid plus golden-section refinement; used for
// simulated maps where the analytic slope is unavailable.
void numeric_minimum(const MapFunction& map, double hi, double* min_eps,
                     double* min_value) {
  constexpr int kCells = 64;
  int best = 0;
  double best_v = map(0.0).value;
  std::vector<double> vals(kCells + 1);
  vals[0] = best_v;
  for (int i = 1; i <= kCells; ++i) {
    const double x = hi * i / kCells;
    vals[i] = map(x).value;
    if (vals[i] < best_v) {
      best_v = vals[i];
      best = i;
    }
  }
  double a = hi * std::max(0, best - 1) / kCells;
  double b = hi * std::min(kCells, best + 1) / kCells;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = map(x1).value, f2 = map(x2).value;
  for (int it = 0; it < 80 && b - a > 1e-9 * std::max(1.0, b); ++it) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = map(x1).value;
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = map(x2).value;
    }
  }
  *min_eps = 0.5 * (a + b);
  *min_value = map(*min_eps).value;
  if (vals[0] <= *min_value) {
    *min_eps = 0.0;
    *min_value = vals[0];
  }
}

}  // namespace

MapFunction MapFunction::closed_form(const ModelParams& params) {
  params.validate();
  MapFunction m;
  m.params_ = params;
  m.closed_form_ = true;
  ModelParams p = params;
  m.fn_ = [p](double eps_td) {
    const double v = massless::map_eval(eps_td, p);
    return MapEval{v, v < 0.0};
  };
  return m;
}

MapFunction MapFunction::simulated(const ModelParams& params,
                                   const sim::SimConfig& config) {
  params.validate();
  config.validate();
  if (!(params.mu > 0.0)) {
    throw std::invalid_argument("simulated map requires mu > 0");
  }
  MapFunction m;
  m.params_ = params;
  m.config_ = config;
  m.closed_form_ = false;
  ModelParams p = params;
  sim::SimConfig c = config;
  m.fn_ = [p, c](double eps_td) {
    const HopRecord rec = sim::simulate_hop(eps_td, p, c);
    return MapEval{rec.eps_surface, rec.failed};
  };
  return m;
}

double numeric_fixed_point(const MapFunction& map, double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw std::invalid_argument("numeric_fixed_point: bad bracket");
  }
  double g_lo = identity_gap(map, lo);
  double g_hi = identity_gap(map, hi);
  if (g_lo * g_hi > 0.0) {
    // Scan for the + -> - crossing; the loss grows with energy, so the gap
    // crosses at most once from above.
    constexpr int kCells = 64;
    bool found = false;
    double a = lo, ga = g_lo;
    for (int i = 1; i <= kCells; ++i) {
      const double x = lo + (hi - lo) * i / kCells;
      const double gx = identity_gap(map, x);
      if (ga > 0.0 && gx <= 0.0) {
        hi = x; g_hi = gx; lo = a; g_lo = ga;
        found = true;
        break;
      }
      a = x;
      ga = gx;
    }
    if (!found) {
      throw NoGaitError(
          "numeric_fixed_point: map does not cross the identity on the "
          "bracket");
    }
  }
  auto gap = [&](double x) { return identity_gap(map, x); };
  return detail::brent(gap, lo, hi, g_lo, g_hi, 1e-9);
}

double numeric_fixed_point(const MapFunction& map) {
  const double guess = closed_form_guess(map.params());
  const double hi = std::max(4.0 * guess, 20.0);
  return numeric_fixed_point(map, 0.0, hi);
}

double numeric_eigenvalue(const MapFunction& map, double eps_star,
                          double step) {
  if (!(eps_star >= 0.0)) {
    throw std::invalid_argument("numeric_eigenvalue: eps_star must be >= 0");
  }
  double h = step > 0.0 ? step : 1e-4 * std::max(1.0, eps_star);
  if (eps_star > 0.0) h = std::min(h, 0.5 * eps_star);
  auto value = [&](double x) {
    const MapEval e = map(x);
    return e.value;
  };
  if (eps_star < h) {
    // One-sided second-order difference at the domain edge.
    return (-3.0 * value(eps_star) + 4.0 * value(eps_star + h) -
            value(eps_star + 2.0 * h)) /
           (2.0 * h);
  }
  auto central = [&](double hh) {
    return (value(eps_star + hh) - value(eps_star - hh)) / (2.0 * hh);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

OrbitRecord iterate_and_detect_period(const MapFunction& map, double eps0,
                                      int transient, int n_samples,
                                      double tol) {
  if (transient < 0 || n_samples < 1) {
    throw std::invalid_argument("iterate_and_detect_period: bad counts");
  }
  OrbitRecord rec;
  double x = eps0;
  for (int i = 0; i < transient; ++i) {
    const MapEval e = map(x);
    if (e.failed) {
      rec.kind = PeriodKind::kFailed;
      return rec;
    }
    x = e.value;
  }
  rec.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const MapEval e = map(x);
    if (e.failed) {
      rec.kind = PeriodKind::kFailed;
      return rec;
    }
    x = e.value;
    rec.samples.push_back(x);
  }
  auto close = [tol](double a, double b) {
    return std::fabs(a - b) <=
           tol * std::max({1.0, std::fabs(a), std::fabs(b)});
  };
  const int max_period = std::max(1, n_samples / 4);
  for (int n = 1; n <= max_period; ++n) {
    bool match = true;
    for (int i = 0; i + n < n_samples; ++i) {
      if (!close(rec.samples[i], rec.samples[i + n])) {
        match = false;
        break;
      }
    }
    if (match) {
      rec.kind = PeriodKind::kPeriodic;
      rec.period = n;
      return rec;
    }
  }
  rec.kind = PeriodKind::kAperiodic;
  return rec;
}

std::vector<BifurcationRecord> bifurcation_scan(
    const ModelParams& base, bool closed_form, const sim::SimConfig& config,
    std::string_view sweep_param, const std::vector<double>& grid,
    const ScanOptions& options) {
  if (grid.empty()) {
    throw std::invalid_argument("bifurcation_scan: empty grid");
  }
  {
    ModelParams probe = base;
    if (!set_model_param(probe, sweep_param, 1.0)) {
      throw std::invalid_argument("bifurcation_scan: unknown sweep parameter");
    }
  }
  const std::string key(sweep_param);
  std::vector<BifurcationRecord> out(grid.size());
  parallel_for(static_cast<int>(grid.size()), options.workers, [&](int i) {
    BifurcationRecord& rec = out[i];
    rec.param_value = grid[i];
    ModelParams p = base;
    set_model_param(p, key, grid[i]);
    p.validate();
    const MapFunction map = closed_form
                                ? MapFunction::closed_form(p)
                                : MapFunction::simulated(p, config);
    const double guess = closed_form_guess(p);
    const double seeds[3] = {0.5 * guess, 2.0 * guess, 1e-3};
    for (double seed : seeds) {
      OrbitRecord orbit = iterate_and_detect_period(
          map, seed, options.transient, options.samples, options.cluster_tol);
      if (orbit.kind != PeriodKind::kFailed) {
        rec.orbit = std::move(orbit);
        rec.viable = true;
        break;
      }
      if (!rec.viable) rec.orbit = std::move(orbit);
    }
    try {
      rec.fp_eps = numeric_fixed_point(map, 0.0, std::max(4.0 * guess, 20.0));
      rec.fp_lambda = numeric_eigenvalue(map, rec.fp_eps);
      rec.fp_exists = true;
      rec.fp_stable = std::fabs(rec.fp_lambda) < 1.0;
    } catch (const std::exception&) {
      rec.fp_exists = false;
    }
  });
  return out;
}

BasinReport classify_basin(const MapFunction& map, int preimage_depth,
                           double resolution) {
  if (preimage_depth < 1 || !(resolution > 0.0)) {
    throw std::invalid_argument("classify_basin: bad depth or resolution");
  }
  BasinReport report;
  if (map.is_closed_form()) {
    report.eps_star = massless::fixed_point(map.params());
    report.lambda = massless::map_slope(report.eps_star, map.params());
  } else {
    report.eps_star = numeric_fixed_point(map);
    report.lambda = numeric_eigenvalue(map, report.eps_star);
  }

  if (std::fabs(report.lambda) >= 1.0) {
    report.classification = BasinClass::kUnstable;
    return report;
  }

  if (map.is_closed_form()) {
    const massless::MapMinimum m = massless::map_minimum(map.params());
    report.min_eps = m.eps_td;
    report.min_value = m.value;
  } else {
    // The decreasing-then-increasing shape is proven only in the massless
    // limit; search a generous range instead of trusting it.
    const double hi = std::max(5.0 * report.eps_star, 10.0);
    numeric_minimum(map, hi, &report.min_eps, &report.min_value);
  }

  if (report.lambda >= 0.0 || report.min_value > 0.0) {
    report.classification = BasinClass::kGlobal;
    return report;
  }

  report.classification = BasinClass::kBanded;
  const double xtol = 0.25 * resolution;
  auto value = [&](double x) { return map(x).value; };

  // Failure interval A0 = {P < 0}: one interval around the minimum.
  const double p0 = value(0.0);
  report.has_a0 = true;
  report.a0_lo = p0 < 0.0 ? 0.0
                          : detail::brent(value, 0.0, report.min_eps, p0,
                                          report.min_value, xtol);
  double hi = std::max(2.0 * report.min_eps, report.min_eps + 8.0);
  while (value(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e14) throw NumericError("classify_basin: A0 is unbounded");
  }
  report.a0_hi =
      detail::brent(value, report.min_eps, hi, report.min_value, value(hi),
                    xtol);

  // Preimages of the failure interval, branch by branch. Targets are value
  // intervals; each monotone branch contributes at most one band.
  std::vector<Interval> level = {{report.a0_lo, report.a0_hi}};
  double right_limit = hi;
  for (int depth = 1; depth <= preimage_depth && !level.empty(); ++depth) {
    std::vector<Interval> next;
    for (const Interval& target : level) {
      // Decreasing branch [0, min_eps]: values span [min_value, p0].
      const double left_lo = std::max(target.lo, report.min_value);
      const double left_hi = std::min(target.hi, p0);
      if (left_hi > left_lo && report.min_eps > 0.0) {
        auto inv = [&](double y) {
          auto g = [&](double x) { return value(x) - y; };
          return detail::brent(g, 0.0, report.min_eps, p0 - y,
                               report.min_value - y, xtol);
        };
        const double a = inv(left_hi);
        const double b = inv(left_lo);
        if (b - a >= resolution) next.push_back({a, b});
      }
      // Increasing branch [min_eps, inf): values span [min_value, inf).
      const double right_lo = std::max(target.lo, report.min_value);
      if (target.hi > right_lo) {
        while (value(right_limit) <= target.hi) {
          right_limit *= 2.0;
          if (right_limit > 1e14) {
            throw NumericError("classify_basin: preimage bracket overflow");
          }
        }
        auto inv = [&](double y) {
          auto g = [&](double x) { return value(x) - y; };
          return detail::brent(g, report.min_eps, right_limit,
                               report.min_value - y, value(right_limit) - y,
                               xtol);
        };
        const double a = inv(right_lo);
        const double b = inv(target.hi);
        if (b - a >= resolution) next.push_back({a, b});
      }
    }
    for (const Interval& band : next) {
      report.bands.push_back({band.lo, band.hi, depth});
    }
    report.depth_reached = depth;
    level = std::move(next);
  }
  std::sort(report.bands.begin(), report.bands.end(),
            [](const BasinBand& a, const BasinBand& b) { return a.lo < b.lo; });
  return report;
}

SurfaceCell constant_fixed_point_cell(double eps_star, double phi,
                                      double kappa_c) {
  if (!(eps_star > 0.0)) {
    throw std::invalid_argument("eps_star must be > 0");
  }
  SurfaceCell cell;
  cell.phi = phi;
  cell.kappa_c = kappa_c;

  ModelParams p;
  p.phi = phi;
  p.kappa_c = kappa_c;
  p.mu = 0.0;

  const double kappa_eq = kappa_c / (1.0 + kappa_c);
  const double root = 1.0 + std::sqrt(1.0 + 2.0 * kappa_eq * eps_star);
  const double phi_le_one_inj = 0.5 * root * root;

  auto fp_gap = [&](double eps_inj) {
    p.eps_inj = eps_inj;
    try {
      return massless::fixed_point(p) - eps_star;
    } catch (const NoGaitError&) {
      return -eps_star;
    }
  };

  if (phi <= 1.0) {
    p.eps_inj = phi_le_one_inj;
  } else {
    double lo = massless::min_injected_energy(phi, kappa_c);
    double g_lo = fp_gap(lo);
    if (g_lo >= 0.0) {
      // The fixed point already exceeds the target at the existence
      // boundary (it equals zero there up to root tolerance, so this only
      // triggers when the root-find landed past the target).
      p.eps_inj = lo;
    } else {
      double hi = std::max(2.0 * lo, phi_le_one_inj);
      double g_hi = fp_gap(hi);
      while (g_hi < 0.0) {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        if (hi > 1e8) return cell;  // absent
        g_hi = fp_gap(hi);
      }
      p.eps_inj = detail::brent(fp_gap, lo, hi, g_lo, g_hi,
                                1e-10 * std::max(1.0, hi));
    }
  }

  try {
    const double fp = massless::fixed_point(p);
    cell.eps_inj = p.eps_inj;
    cell.lambda = massless::eigenvalue(p, fp);
    cell.eta = fp / (p.eps_inj + fp);
    cell.alpha = std::fabs(cell.lambda) <= 1.0
                     ? 1.0 - cell.lambda * cell.lambda
                     : 0.0;
    cell.stable = std::fabs(cell.lambda) < 1.0;
    cell.exists = true;
  } catch (const std::exception&) {
    cell.exists = false;
  }
  return cell;
}

std::vector<SurfaceCell> constant_fixed_point_surface(
    double eps_star, const std::vector<double>& phi_grid,
    const std::vector<double>& kappa_grid, int workers) {
  std::vector<SurfaceCell> cells(phi_grid.size() * kappa_grid.size());
  const int n_phi = static_cast<int>(phi_grid.size());
  parallel_for(static_cast<int>(cells.size()), workers, [&](int idx) {
    const int i = idx % n_phi;
    const int j = idx / n_phi;
    cells[idx] = constant_fixed_point_cell(eps_star, phi_grid[i],
                                           kappa_grid[j]);
  });
  return cells;
}

std::vector<CurvePoint> constant_eigenvalue_curve(
    double eps_star, double lambda_target,
    const std::vector<double>& kappa_grid, int workers) {
  std::vector<CurvePoint> points(kappa_grid.size());
  parallel_for(static_cast<int>(kappa_grid.size()), workers, [&](int idx) {
    CurvePoint& pt = points[idx];
    const double kappa_c = kappa_grid[idx];
    pt.kappa_c = kappa_c;

    auto lambda_at = [&](double phi, bool* ok) {
      const SurfaceCell c = constant_fixed_point_cell(eps_star, phi, kappa_c);
      *ok = c.exists;
      return c;
    };

    bool ok = false;
    const SurfaceCell at_one = lambda_at(1.0, &ok);
    if (!ok) return;
    if (lambda_target > at_one.lambda + 1e-12) return;  // unreachable
    double phi = 1.0;
    if (std::fabs(lambda_target - at_one.lambda) > 1e-12) {
      // The eigenvalue decreases along the surface as phi grows.
      double lo = 1.0, g_lo = at_one.lambda - lambda_target;
      double hi = 1.5, g_hi;
      for (;;) {
        bool valid = false;
        const SurfaceCell c = lambda_at(hi, &valid);
        if (!valid) return;
        g_hi = c.lambda - lambda_target;
        if (g_hi <= 0.0) break;
        lo = hi;
        g_lo = g_hi;
        hi *= 1.5;
        if (hi > 64.0) return;  // absent
      }
      auto gap = [&](double x) {
        bool valid = false;
        const SurfaceCell c = lambda_at(x, &valid);
        return valid ? c.lambda - lambda_target : -1.0;
      };
      phi = detail::brent(gap, lo, hi, g_lo, g_hi, 1e-10);
    }
    const SurfaceCell c = constant_fixed_point_cell(eps_star, phi, kappa_c);
    if (!c.exists) return;
    ModelParams p;
    p.eps_inj = c.eps_inj;
    p.phi = phi;
    p.kappa_c = kappa_c;
    p.mu = 0.0;
    pt.exists = true;
    pt.phi = phi;
    pt.eps_inj = c.eps_inj;
    pt.fixed_point_error = std::fabs(massless::fixed_point(p) - eps_star);
    pt.lambda_error = std::fabs(c.lambda - lambda_target);
  });
  return points;
}

}  // namespace hopmap::analysis
