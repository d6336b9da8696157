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

#ifndef HOPMAP_MODEL_HPP_
#define HOPMAP_MODEL_HPP_

#include <string_view>

#include "hopmap/types.hpp"

namespace hopmap {

/// Force applied by the leg actuator emulating a linear spring:
/// stiffness * (unloaded_length - xi_b + xi_f). Positive pushes the body up
/// and the foot down. Selecting the compression vs. extension spring is the
/// caller's responsibility (compression while v_b <= v_f).
double actuator_force(const HopperState& state, const LegSpring& spring);

/// Ground reaction force on the foot.
///
/// Returns 0 in flight (xi_f > 0 or v_f > 0), the depth-proportional force
/// -xi_f while the ground yields (xi_f <= 0, v_f < 0), and the force that
/// pins the foot, applied_actuator_force + mu/(1+mu), in static stance
/// (xi_f < 0, v_f == 0). The ground resists compression only and never
/// springs back.
double ground_force(const HopperState& state, double applied_actuator_force,
                    double mu);

/// Center-of-mass kinetic energy, 0.5*((v_b + mu*v_f)/(1+mu))^2.
double com_kinetic_energy(const HopperState& state, double mu);

/// Solves for the extension-mode spring installed at the
/// compression-extension transition.
///
/// The returned (stiffness, unloaded length) satisfy both controller
/// contracts exactly: the spring swap injects params.eps_inj of elastic
/// energy, and the total force applied to the ground immediately after the
/// swap equals params.phi times the yield threshold -xi_f. Inverted from
/// those two conditions directly: with deflection D = lambda_c - xi_b + xi_f
/// and leg force F = -phi*xi_f - mu/(1+mu),
///   kappa_e = F^2 / (2 eps_inj + kappa_c D^2),
///   lambda_e = (2 eps_inj + kappa_c D^2) / F + xi_b - xi_f.
///
/// Throws std::invalid_argument when F <= 0 (the commanded force ratio gives
/// a non-positive leg force, so no spring realizes it) or when the requested
/// elastic energy is not positive.
LegSpring spring_update(const HopperState& state_at_ce,
                        const LegSpring& compression_spring,
                        const ModelParams& params);

struct LiftoffResult {
  HopperState state;
  double energy_loss;
};

/// Reset map applied at liftoff, modeling the flight-phase controller as a
/// perfectly inelastic collision that brings the foot to rest relative to
/// the body and restores the compression-mode leg length.
///
/// The post-liftoff state conserves COM position and COM velocity: both
/// velocities become (v_b + mu v_f)/(1+mu) and the positions shift so that
/// xi_b - xi_f = lambda_c. The returned loss is
///   mu * (mu + kappa_e (v_b - v_f)^2) / (2 kappa_e (1+mu)^2),
/// the collision loss plus the residual extension-spring energy discarded by
/// the length reset; it vanishes as mu -> 0.
LiftoffResult liftoff_reset(const HopperState& state, const ModelParams& params,
                            const LegSpring& extension_spring);

struct NondimResult {
  double kappa_c = 0.0;
  double mu = 0.0;
  double lambda_c = 0.0;
  Scales scales;
};

/// Converts a dimensional hopper description to the dimensionless parameter
/// set and the characteristic scales. Throws std::invalid_argument on
/// non-positive ground stiffness or body mass.
NondimResult nondimensionalize(const DimensionalSpec& spec);

/// Inverse of nondimensionalize: reconstructs the dimensional description
/// from dimensionless ratios and characteristic scales.
DimensionalSpec dimensionalize(double kappa_c, double mu, double lambda_c,
                               const Scales& scales);

/// Assigns one ModelParams field by name ("eps_inj", "phi", "kappa_c", "mu",
/// "lambda_c", "phi_fric"). Returns false for unknown names.
bool set_model_param(ModelParams& params, std::string_view key, double value);

/// Reads one ModelParams field by name. Returns false for unknown names.
bool get_model_param(const ModelParams& params, std::string_view key,
                     double* value);

}  // namespace hopmap

#endif  // HOPMAP_MODEL_HPP_
