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

#ifndef HOPMAP_TYPES_HPP_
#define HOPMAP_TYPES_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopmap {

// Thrown when no hopping gait exists for the requested parameters (injected
// energy below the existence boundary, or a fixed-point search that finds no
// root on the nonnegative axis).
struct NoGaitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on numerical breakdown: integrator step underflow, event-cap
// overflow, or a root/bracket search that cannot converge.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimensionless control and terrain parameters of the hopper template.
///
/// All quantities are nondimensionalized by the characteristic mass
/// m_u = m_b + m_f, length q_u = m_u*g/k_g and time t_u = sqrt(m_u/k_g)
/// of the total-mass/ground-spring oscillator.
struct ModelParams {
  // Energy injected per hop at the compression-extension transition (>= 0).
  double eps_inj = 10.0;
  // Commanded ratio of total ground-applied force at injection to the
  // depth-dependent yield threshold (> 0). phi > 1 forces reyielding.
  double phi = 1.0;
  // Compression-mode leg stiffness over ground stiffness (> 0).
  double kappa_c = 0.1;
  // Foot mass over body mass (>= 0). The event-driven simulator requires
  // mu > 0; the closed-form map covers the mu -> 0 limit.
  double mu = 0.0;
  // Compression-mode unloaded leg length (> 0).
  double lambda_c = 35.0;
  // Optional Coulomb guiderail friction coefficient acting on the body,
  // 0 <= phi_fric < 1. Zero disables friction.
  double phi_fric = 0.0;

  // Effective force ratio; the ground cannot un-yield, so ratios below one
  // behave like one in the loss accounting.
  double phi_eff() const { return phi > 1.0 ? phi : 1.0; }

  // Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

/// State of the two-mass hopper: positions are measured upward from the
/// undeformed terrain surface, velocities with respect to dimensionless time.
struct HopperState {
  double xi_b = 0.0;  // body position
  double xi_f = 0.0;  // foot position
  double v_b = 0.0;   // body velocity
  double v_f = 0.0;   // foot velocity
};

enum class SpringMode { kCompression, kExtension };

/// Linear leg spring emulated by the actuator.
struct LegSpring {
  double stiffness = 0.0;
  double unloaded_length = 0.0;
  SpringMode mode = SpringMode::kCompression;
};

/// The five continuous-dynamics domains of the hybrid hopping cycle.
enum class HybridDomain {
  kFlight,
  kYieldingCompression,
  kStaticCompression,
  kYieldingExtension,
  kStaticExtension,
};

const char* to_string(HybridDomain d);

/// The five switching events between domains.
enum class EventType {
  kTouchdown,             // foot reaches the surface moving downward
  kFootStop,              // intruding foot comes to rest below yield force
  kReyield,               // applied force crosses the yield threshold
  kCompressionExtension,  // relative velocity crosses zero; energy injection
  kLiftoff,               // foot velocity becomes positive; leg reset
};

const char* to_string(EventType e);

struct TransitionEvent {
  EventType type;
  double tau;
};

/// Per-hop energy ledger. A hop spans one touchdown to the next.
struct HopRecord {
  // COM kinetic energy at the opening touchdown.
  double eps_td_in = 0.0;
  // COM kinetic energy at the next touchdown; absent when the hop failed.
  std::optional<double> eps_td_out;
  // COM kinetic energy at the xi_f = 0 crossing of the post-liftoff flight,
  // extended below zero when the flight apex stays inside the crater. Equals
  // *eps_td_out for successful hops; negative values mark failed hops. This
  // is the value iterated by the hop-to-hop energy map. Stances that can
  // never reach liftoff carry a large negative sentinel (-1e6).
  double eps_surface = 0.0;
  // Energy dissipated by plastic ground deformation (half the squared
  // maximum foot depth).
  double eps_ground_loss = 0.0;
  // Energy dissipated by the liftoff reset (inelastic foot collision plus
  // the discarded residual extension-spring energy).
  double eps_lo_loss = 0.0;
  // Work done against guiderail friction; zero unless phi_fric > 0.
  double eps_friction_loss = 0.0;
  // Foot depth immediately before energy injection, xi_f(tau_CE-).
  double depth_ce = 0.0;
  // Time-ordered transition events, starting at this hop's touchdown and
  // ending at liftoff (failed hops may end earlier).
  std::vector<TransitionEvent> events;
  bool failed = false;
};

/// Dimensional description of a physical hopper and substrate.
struct DimensionalSpec {
  double body_mass = 0.0;         // kg
  double foot_mass = 0.0;         // kg; may be zero
  double ground_stiffness = 0.0;  // N/m, force per unit foot depth
  double leg_stiffness_c = 0.0;   // N/m, compression-mode leg spring
  double unloaded_leg_length = 0.0;  // m
  double gravity = 0.0;              // m/s^2

  void validate() const;
};

/// Characteristic scales produced by nondimensionalization.
struct Scales {
  double mass = 0.0;    // m_u = m_b + m_f            [kg]
  double length = 0.0;  // q_u = m_u g / k_g          [m]
  double time = 0.0;    // t_u = sqrt(m_u / k_g)      [s]
  double energy = 0.0;  // m_u g q_u                  [J]
};

}  // namespace hopmap

#endif  // HOPMAP_TYPES_HPP_
