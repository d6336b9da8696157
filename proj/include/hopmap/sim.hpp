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

#ifndef HOPMAP_SIM_HPP_
#define HOPMAP_SIM_HPP_

#include <array>
#include <vector>

#include "hopmap/types.hpp"

namespace hopmap::sim {

/// Integrator and event-location settings. Defaults are tight enough that
/// the per-hop energy ledger closes to better than 1e-6 relative.
struct SimConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  // Width to which switching times are bracketed on the dense output.
  double event_tol = 1e-10;
  double max_step = 0.25;
  // Safety cap; a hop that produces more transitions than this indicates a
  // modeling or tolerance pathology and raises NumericError.
  int max_events_per_hop = 20000;
  int max_hops = 100000;

  void validate() const;
};

struct Sample {
  double tau;
  HopperState state;
  HybridDomain domain;
};

/// Result of an event-driven run: dense-ish state samples plus the per-hop
/// energy ledger. Sample times are strictly increasing and domain changes
/// coincide with the logged transition events.
struct Trajectory {
  std::vector<Sample> samples;
  std::vector<HopRecord> hops;
};

/// State derivative (xi_b', xi_f', v_b', v_f') on one hybrid domain.
///
/// Yielding domains integrate both masses and require mu > 0 (the foot
/// equation is singular at mu = 0); static domains pin the foot and
/// integrate only the body; flight treats body and foot as one rigid
/// assembly, since the flight-phase controller holds the foot fixed
/// relative to the body. Guiderail friction, when enabled, acts on the
/// body only.
std::array<double, 4> domain_dynamics(HybridDomain domain,
                                      const HopperState& state,
                                      const LegSpring& spring,
                                      const ModelParams& params);

/// Touchdown state for a given COM kinetic energy: foot at the surface,
/// leg at its compression-mode length, both masses falling together.
HopperState touchdown_state(double eps_td, const ModelParams& params);

/// Runs a single hop of the energy map: starts from touchdown_state(eps_td),
/// integrates stance through liftoff, applies the liftoff reset and the
/// ballistic flight. The returned record carries the full energy ledger.
/// The hop fails (rather than erroring) when the flight apex stays below
/// the undeformed surface, and also when the stance can never reach liftoff
/// (possible for phi < 1 at low touchdown energy, where the commanded
/// extension force cannot carry the body past the unloaded leg length).
/// Requires mu > 0.
HopRecord simulate_hop(double eps_td, const ModelParams& params,
                       const SimConfig& config);

/// Chains hops from an arbitrary initial state, logging samples and one
/// HopRecord per touchdown-to-touchdown interval. The run stops after
/// n_hops records, on a failed hop, or at config.max_hops. Initial states
/// in flight are first rigidified the way the flight controller would.
/// Requires mu > 0.
Trajectory simulate_trajectory(const HopperState& initial,
                               const ModelParams& params,
                               const SimConfig& config, int n_hops);

}  // namespace hopmap::sim

#endif  // HOPMAP_SIM_HPP_
