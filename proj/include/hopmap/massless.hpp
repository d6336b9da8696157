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

// Closed-form hop-to-hop energy map in the massless-foot limit, with exact
// fixed points, analytic eigenvalues and the derived gait metrics. The mu
// field of ModelParams is ignored throughout this module.

#ifndef HOPMAP_MASSLESS_HPP_
#define HOPMAP_MASSLESS_HPP_

#include "hopmap/types.hpp"

namespace hopmap::massless {

/// Coefficients of the rational loss term of the closed-form map,
///   P(eps) = eps + eps_inj - eps_inj * ((a x^3 + c x)/(b x^2 + d))^2,
/// where x is the pre-injection foot depth. All four are positive whenever
/// eps_inj > 0.
struct MapCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  // Equivalent stiffness of leg and ground springs in series, k/(1+k).
  double kappa_eq_c = 0.0;
  double phi_eff = 1.0;

  static MapCoefficients from(double eps_inj, double phi, double kappa_c);
  static MapCoefficients from(const ModelParams& params);

  // Discriminant of a x^3 + b x^2 + c x + d; negative means one real root.
  double cubic_discriminant() const;
};

/// Foot depth immediately before energy injection when touching down with
/// COM kinetic energy eps_td: -(1 + sqrt(1 + 2 kappa_eq_c eps_td)).
/// Always <= -2; the hopper sinks to twice the weight-support depth even
/// when released from rest.
double pre_injection_depth(double eps_td, double kappa_c);

/// Ratio of post-reyielding to pre-reyielding foot depth (>= 1). Equals one
/// for phi <= 1 (no reyield) and approaches 2*phi_eff - 1 as kappa_c -> 0.
double depth_ratio(double xi_f_minus, const ModelParams& params);

/// Series-spring equilibrium depth of the extension phase, derived from the
/// actual spring installed by the controller at the given pre-injection
/// depth. The post-reyield depth is 2*equilibrium - xi_f_minus; exposed for
/// cross-checking depth_ratio against the controller equations.
double extension_equilibrium_depth(double xi_f_minus,
                                   const ModelParams& params);

/// Energy lost to the ground in one hop, half the squared post-reyield
/// depth.
double energy_loss(double eps_td, const ModelParams& params);

/// One application of the hop-to-hop energy map. A negative return value
/// signals a failed hop: the hopper cannot clear the crater it made.
double map_eval(double eps_td, const ModelParams& params);

/// Analytic derivative dP/d(eps_td) at any eps_td >= 0. Always < 1.
double map_slope(double eps_td, const ModelParams& params);

/// The unique period-one fixed point of the map. Solves the cubic
/// a x^3 + b x^2 + c x + d = 0 for its single real root (Cardano plus a
/// Newton polish to 1e-12 residual), requires x <= -2, and maps back via
/// eps* = (x^2 + 2x)/(2 kappa_eq_c). Throws NoGaitError when eps_inj lies
/// below the existence boundary (the root would give eps* < 0).
double fixed_point(const ModelParams& params);

/// Map eigenvalue at a fixed point; equal to map_slope there.
double eigenvalue(const ModelParams& params, double eps_star);

/// Minimum injected energy for which a gait exists: exactly 2 for phi <= 1;
/// for phi > 1, the root of eps_loss(0; eps_inj) = eps_inj, located to
/// 1e-10.
double min_injected_energy(double phi, double kappa_c);

struct MapMinimum {
  double eps_td = 0.0;
  double value = 0.0;
};

/// Global minimum of the map over eps_td >= 0. The map is strictly
/// decreasing then strictly increasing, so the minimum is the single root
/// of the analytic slope (or the left endpoint).
MapMinimum map_minimum(const ModelParams& params);

struct GaitAnalysis {
  double fixed_point = 0.0;
  double eigenvalue = 0.0;
  double efficiency = 0.0;        // eps* / (eps_inj + eps*)
  double stability_margin = 0.0;  // 1 - eigenvalue^2 inside [-1, 1], else 0
  bool globally_stable = false;
};

/// Fixed point, eigenvalue and derived locomotion metrics. The fixed point
/// is globally stable when the eigenvalue is nonnegative, or when the map
/// minimum is positive and |eigenvalue| < 1. Propagates NoGaitError.
GaitAnalysis gait_metrics(const ModelParams& params);

}  // namespace hopmap::massless

#endif  // HOPMAP_MASSLESS_HPP_
