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

#include "hopmap/model.hpp"

#include <cmath>
#include <string>

namespace hopmap {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  require(finite(eps_inj) && eps_inj >= 0.0, "eps_inj must be >= 0");
  require(finite(phi) && phi > 0.0, "phi must be > 0");
  require(finite(kappa_c) && kappa_c > 0.0, "kappa_c must be > 0");
  require(finite(mu) && mu >= 0.0, "mu must be >= 0");
  require(finite(lambda_c) && lambda_c > 0.0, "lambda_c must be > 0");
  require(finite(phi_fric) && phi_fric >= 0.0 && phi_fric < 1.0,
          "phi_fric must be in [0, 1)");
}

void DimensionalSpec::validate() const {
  require(finite(body_mass) && body_mass > 0.0, "body_mass must be > 0");
  require(finite(foot_mass) && foot_mass >= 0.0, "foot_mass must be >= 0");
  require(finite(ground_stiffness) && ground_stiffness > 0.0,
          "ground_stiffness must be > 0");
  require(finite(leg_stiffness_c) && leg_stiffness_c > 0.0,
          "leg_stiffness_c must be > 0");
  require(finite(unloaded_leg_length) && unloaded_leg_length > 0.0,
          "unloaded_leg_length must be > 0");
  require(finite(gravity) && gravity > 0.0, "gravity must be > 0");
}

const char* to_string(HybridDomain d) {
  switch (d) {
    case HybridDomain::kFlight: return "F";
    case HybridDomain::kYieldingCompression: return "YC";
    case HybridDomain::kStaticCompression: return "SC";
    case HybridDomain::kYieldingExtension: return "YE";
    case HybridDomain::kStaticExtension: return "SE";
  }
  return "?";
}

const char* to_string(EventType e) {
  switch (e) {
    case EventType::kTouchdown: return "TD";
    case EventType::kFootStop: return "FS";
    case EventType::kReyield: return "RY";
    case EventType::kCompressionExtension: return "CE";
    case EventType::kLiftoff: return "LO";
  }
  return "?";
}

double actuator_force(const HopperState& state, const LegSpring& spring) {
  return spring.stiffness * (spring.unloaded_length - state.xi_b + state.xi_f);
}

double ground_force(const HopperState& state, double applied_actuator_force,
                    double mu) {
  if (state.xi_f > 0.0 || state.v_f > 0.0) return 0.0;
  if (state.v_f < 0.0) return -state.xi_f;
  return applied_actuator_force + mu / (1.0 + mu);
}

double com_kinetic_energy(const HopperState& state, double mu) {
  const double v_com = (state.v_b + mu * state.v_f) / (1.0 + mu);
  return 0.5 * v_com * v_com;
}

LegSpring spring_update(const HopperState& state_at_ce,
                        const LegSpring& compression_spring,
                        const ModelParams& params) {
  const double deflection = compression_spring.unloaded_length -
                            state_at_ce.xi_b + state_at_ce.xi_f;
  const double leg_force =
      -params.phi * state_at_ce.xi_f - params.mu / (1.0 + params.mu);
  if (leg_force <= 0.0) {
    throw std::invalid_argument(
        "spring_update: commanded force ratio yields a non-positive leg "
        "force");
  }
  const double stored = 2.0 * params.eps_inj +
                        compression_spring.stiffness * deflection * deflection;
  if (stored <= 0.0) {
    throw std::invalid_argument(
        "spring_update: no elastic energy available for the extension "
        "spring");
  }
  LegSpring extension;
  extension.mode = SpringMode::kExtension;
  extension.stiffness = leg_force * leg_force / stored;
  const double ext_deflection = stored / leg_force;
  extension.unloaded_length =
      ext_deflection + state_at_ce.xi_b - state_at_ce.xi_f;
  return extension;
}

LiftoffResult liftoff_reset(const HopperState& state, const ModelParams& params,
                            const LegSpring& extension_spring) {
  const double mu = params.mu;
  const double one_plus = 1.0 + mu;
  const double v_com = (state.v_b + mu * state.v_f) / one_plus;
  const double xi_com = (state.xi_b + mu * state.xi_f) / one_plus;

  LiftoffResult out;
  out.state.v_b = v_com;
  out.state.v_f = v_com;
  out.state.xi_b = xi_com + params.lambda_c * mu / one_plus;
  out.state.xi_f = xi_com - params.lambda_c / one_plus;

  if (mu == 0.0) {
    out.energy_loss = 0.0;
    return out;
  }
  const double dv = state.v_b - state.v_f;
  out.energy_loss = mu * (mu + extension_spring.stiffness * dv * dv) /
                    (2.0 * extension_spring.stiffness * one_plus * one_plus);
  return out;
}

NondimResult nondimensionalize(const DimensionalSpec& spec) {
  spec.validate();
  NondimResult out;
  out.kappa_c = spec.leg_stiffness_c / spec.ground_stiffness;
  out.mu = spec.foot_mass / spec.body_mass;
  out.scales.mass = spec.body_mass + spec.foot_mass;
  out.scales.length = out.scales.mass * spec.gravity / spec.ground_stiffness;
  out.scales.time = std::sqrt(out.scales.mass / spec.ground_stiffness);
  out.scales.energy = out.scales.mass * spec.gravity * out.scales.length;
  out.lambda_c = spec.unloaded_leg_length / out.scales.length;
  return out;
}

bool set_model_param(ModelParams& params, std::string_view key, double value) {
  if (key == "eps_inj") params.eps_inj = value;
  else if (key == "phi") params.phi = value;
  else if (key == "kappa_c") params.kappa_c = value;
  else if (key == "mu") params.mu = value;
  else if (key == "lambda_c") params.lambda_c = value;
  else if (key == "phi_fric") params.phi_fric = value;
  else return false;
  return true;
}

bool get_model_param(const ModelParams& params, std::string_view key,
                     double* value) {
  if (key == "eps_inj") *value = params.eps_inj;
  else if (key == "phi") *value = params.phi;
  else if (key == "kappa_c") *value = params.kappa_c;
  else if (key == "mu") *value = params.mu;
  else if (key == "lambda_c") *value = params.lambda_c;
  else if (key == "phi_fric") *value = params.phi_fric;
  else return false;
  return true;
}

DimensionalSpec dimensionalize(double kappa_c, double mu, double lambda_c,
                               const Scales& scales) {
  if (!(scales.mass > 0.0 && scales.length > 0.0 && scales.time > 0.0)) {
    throw std::invalid_argument("dimensionalize: scales must be positive");
  }
  DimensionalSpec spec;
  const double k_g = scales.mass / (scales.time * scales.time);
  spec.gravity = scales.length / (scales.time * scales.time);
  spec.ground_stiffness = k_g;
  spec.leg_stiffness_c = kappa_c * k_g;
  spec.body_mass = scales.mass / (1.0 + mu);
  spec.foot_mass = scales.mass * mu / (1.0 + mu);
  spec.unloaded_leg_length = lambda_c * scales.length;
  spec.validate();
  return spec;
}

}  // namespace hopmap
