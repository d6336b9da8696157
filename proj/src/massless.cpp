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

#include "hopmap/massless.hpp"

#include <cmath>

#include "hopmap/model.hpp"
#include "rootfind.hpp"

namespace hopmap::massless {

namespace {

double kappa_eq(double kappa_c) { return kappa_c / (1.0 + kappa_c); }

// Numerator and denominator of the depth ratio as functions of the squared
// pre-injection depth.
struct Ratio {
  double num;
  double den;
};

Ratio ratio_parts(double xi2, double eps_inj, double phi_eff, double kappa_c) {
  const double two_phi = 2.0 * phi_eff - 1.0;
  Ratio r;
  r.num = 2.0 * two_phi * eps_inj * kappa_c +
          (phi_eff * phi_eff * kappa_c + two_phi) * xi2;
  r.den = 2.0 * eps_inj * kappa_c + (phi_eff * phi_eff * kappa_c + 1.0) * xi2;
  return r;
}

void check_positive(double phi, double kappa_c) {
  if (!(phi > 0.0)) throw std::invalid_argument("phi must be > 0");
  if (!(kappa_c > 0.0)) throw std::invalid_argument("kappa_c must be > 0");
}

// Single real root of a monic-normalizable cubic with positive coefficients,
// via the trigonometric-free Cardano branch plus a Newton polish on the
// original coefficients.
double cubic_real_root(const MapCoefficients& k) {
  const double B = k.b / k.a;
  const double C = k.c / k.a;
  const double D = k.d / k.a;
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (!(disc > 0.0)) {
    throw NumericError(
        "cubic has multiple real roots; parameters outside the single-root "
        "regime");
  }
  const double r = std::sqrt(disc);
  const double u = std::cbrt(-q / 2.0 + r);
  const double v = u != 0.0 ? -p / (3.0 * u) : std::cbrt(-q / 2.0 - r);
  double x = u + v - B / 3.0;

  const double scale = std::fabs(k.a * x * x * x) + std::fabs(k.b * x * x) +
                       std::fabs(k.c * x) + std::fabs(k.d);
  for (int i = 0; i < 8; ++i) {
    const double f = ((k.a * x + k.b) * x + k.c) * x + k.d;
    if (std::fabs(f) <= 1e-12 * scale) break;
    const double df = (3.0 * k.a * x + 2.0 * k.b) * x + k.c;
    if (df == 0.0) break;
    x -= f / df;
  }
  return x;
}

}  // namespace

MapCoefficients MapCoefficients::from(double eps_inj, double phi,
                                      double kappa_c) {
  check_positive(phi, kappa_c);
  if (!(eps_inj >= 0.0)) throw std::invalid_argument("eps_inj must be >= 0");
  MapCoefficients k;
  k.phi_eff = phi > 1.0 ? phi : 1.0;
  k.kappa_eq_c = kappa_eq(kappa_c);
  const double root = std::sqrt(2.0 * eps_inj);
  const double pk = k.phi_eff * k.phi_eff * kappa_c;
  k.a = pk + 2.0 * k.phi_eff - 1.0;
  k.b = (pk + 1.0) * root;
  k.c = 2.0 * eps_inj * kappa_c * (2.0 * k.phi_eff - 1.0);
  k.d = 2.0 * eps_inj * kappa_c * root;
  return k;
}

MapCoefficients MapCoefficients::from(const ModelParams& params) {
  return from(params.eps_inj, params.phi, params.kappa_c);
}

double MapCoefficients::cubic_discriminant() const {
  return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
         4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

double pre_injection_depth(double eps_td, double kappa_c) {
  if (!(eps_td >= 0.0)) throw std::invalid_argument("eps_td must be >= 0");
  if (!(kappa_c > 0.0)) throw std::invalid_argument("kappa_c must be > 0");
  return -(1.0 + std::sqrt(1.0 + 2.0 * kappa_eq(kappa_c) * eps_td));
}

double depth_ratio(double xi_f_minus, const ModelParams& params) {
  check_positive(params.phi, params.kappa_c);
  if (!(xi_f_minus < 0.0)) {
    throw std::invalid_argument("xi_f_minus must be negative");
  }
  const Ratio r = ratio_parts(xi_f_minus * xi_f_minus, params.eps_inj,
                              params.phi_eff(), params.kappa_c);
  return r.num / r.den;
}

double extension_equilibrium_depth(double xi_f_minus,
                                   const ModelParams& params) {
  // Reconstruct the compression-extension state this depth corresponds to
  // and install the spring the controller would actually command.
  HopperState ce;
  ce.xi_f = xi_f_minus;
  ce.xi_b = params.lambda_c + xi_f_minus / kappa_eq(params.kappa_c);
  ModelParams massless = params;
  massless.mu = 0.0;
  massless.phi = params.phi_eff();
  const LegSpring compression{params.kappa_c, params.lambda_c,
                              SpringMode::kCompression};
  const LegSpring extension = spring_update(ce, compression, massless);
  const double kappa_eq_e = extension.stiffness / (1.0 + extension.stiffness);
  return -kappa_eq_e * (extension.unloaded_length - ce.xi_b);
}

double energy_loss(double eps_td, const ModelParams& params) {
  const double xi = pre_injection_depth(eps_td, params.kappa_c);
  const double post = depth_ratio(xi, params) * xi;
  return 0.5 * post * post;
}

double map_eval(double eps_td, const ModelParams& params) {
  return eps_td + params.eps_inj - energy_loss(eps_td, params);
}

double map_slope(double eps_td, const ModelParams& params) {
  const double phi_eff = params.phi_eff();
  const double kappa_c = params.kappa_c;
  const double xi = pre_injection_depth(eps_td, kappa_c);
  const double xi2 = xi * xi;
  const Ratio r = ratio_parts(xi2, params.eps_inj, phi_eff, kappa_c);
  const double ratio = r.num / r.den;
  const double pk = phi_eff * phi_eff * kappa_c;
  const double dnum = 2.0 * (pk + 2.0 * phi_eff - 1.0) * xi;
  const double dden = 2.0 * (pk + 1.0) * xi;
  const double dratio = (dnum * r.den - r.num * dden) / (r.den * r.den);
  // loss = 0.5 (ratio * xi)^2
  const double dloss_dxi = ratio * xi * (ratio + xi * dratio);
  const double s = -xi - 1.0;  // sqrt(1 + 2 kappa_eq eps_td)
  const double dxi_deps = -kappa_eq(kappa_c) / s;
  return 1.0 - dloss_dxi * dxi_deps;
}

double fixed_point(const ModelParams& params) {
  check_positive(params.phi, params.kappa_c);
  if (!(params.eps_inj >= 2.0)) {
    throw NoGaitError("eps_inj below the minimum injected energy (2)");
  }
  const MapCoefficients k = MapCoefficients::from(params);
  if (!(k.cubic_discriminant() < 0.0)) {
    throw NumericError("fixed-point cubic does not have a unique real root");
  }
  const double xi = cubic_real_root(k);
  if (!(xi <= -2.0 + 1e-9)) {
    throw NoGaitError("no gait: the map lies below the identity for all "
                      "nonnegative touchdown energies");
  }
  const double eps_star = (xi * xi + 2.0 * xi) / (2.0 * k.kappa_eq_c);
  return eps_star > 0.0 ? eps_star : 0.0;
}

double eigenvalue(const ModelParams& params, double eps_star) {
  return map_slope(eps_star, params);
}

double min_injected_energy(double phi, double kappa_c) {
  check_positive(phi, kappa_c);
  if (phi <= 1.0) return 2.0;
  // Existence boundary: the loss at eps_td = 0 (depth -2) equals the
  // injection, i.e. 8a + 2c = 4b + d in the map coefficients.
  auto gap = [&](double eps_inj) {
    const MapCoefficients k = MapCoefficients::from(eps_inj, phi, kappa_c);
    return (4.0 * k.b + k.d) - (8.0 * k.a + 2.0 * k.c);
  };
  double lo = 1e-9;
  double hi = 4.0;
  double g_lo = gap(lo);
  double g_hi = gap(hi);
  while (g_hi <= 0.0) {
    lo = hi;
    g_lo = g_hi;
    hi *= 2.0;
    if (hi > 1e9) throw NumericError("min_injected_energy bracket overflow");
    g_hi = gap(hi);
  }
  return detail::brent(gap, lo, hi, g_lo, g_hi, 1e-10);
}

MapMinimum map_minimum(const ModelParams& params) {
  auto slope = [&](double e) { return map_slope(e, params); };
  MapMinimum m;
  if (slope(0.0) >= 0.0) {
    m.eps_td = 0.0;
    m.value = map_eval(0.0, params);
    return m;
  }
  double hi = 8.0;
  while (slope(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e14) throw NumericError("map_minimum bracket overflow");
  }
  m.eps_td = detail::brent(slope, 0.0, hi, 1e-12);
  m.value = map_eval(m.eps_td, params);
  return m;
}

GaitAnalysis gait_metrics(const ModelParams& params) {
  GaitAnalysis g;
  g.fixed_point = fixed_point(params);
  g.eigenvalue = eigenvalue(params, g.fixed_point);
  g.efficiency = g.fixed_point / (params.eps_inj + g.fixed_point);
  g.stability_margin = std::fabs(g.eigenvalue) <= 1.0
                           ? 1.0 - g.eigenvalue * g.eigenvalue
                           : 0.0;
  if (g.eigenvalue >= 0.0) {
    g.globally_stable = true;
  } else if (std::fabs(g.eigenvalue) < 1.0) {
    g.globally_stable = map_minimum(params).value > 0.0;
  } else {
    g.globally_stable = false;
  }
  return g;
}

}  // namespace hopmap::massless
