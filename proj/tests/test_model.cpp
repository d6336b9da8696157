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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "hopmap/model.hpp"

using namespace hopmap;

namespace {

// Controller contracts the extension spring must reproduce exactly.
double injected_energy(const HopperState& ce, const LegSpring& comp,
                       const LegSpring& ext) {
  const double u = ext.unloaded_length - ce.xi_b + ce.xi_f;
  const double d = comp.unloaded_length - ce.xi_b + ce.xi_f;
  return 0.5 * ext.stiffness * u * u - 0.5 * comp.stiffness * d * d;
}

double force_ratio(const HopperState& ce, const LegSpring& ext, double mu) {
  const double u = ext.unloaded_length - ce.xi_b + ce.xi_f;
  return (ext.stiffness * u + mu / (1.0 + mu)) / (-ce.xi_f);
}

double total_mechanical_energy(const HopperState& s, double mu,
                               const LegSpring& spring) {
  const double m_b = 1.0 / (1.0 + mu);
  const double m_f = mu / (1.0 + mu);
  const double deflection = spring.unloaded_length - s.xi_b + s.xi_f;
  return 0.5 * m_b * s.v_b * s.v_b + 0.5 * m_f * s.v_f * s.v_f +
         m_b * s.xi_b + m_f * s.xi_f +
         0.5 * spring.stiffness * deflection * deflection;
}

}  // namespace

TEST_CASE("actuator force follows the linear spring law") {
  const double lambda_c = 35.0;
  CHECK(actuator_force({lambda_c, 0.0, 0.0, 0.0},
                       {0.3, lambda_c, SpringMode::kCompression}) ==
        doctest::Approx(0.0));
  // Deflection of 20 at stiffness 0.1.
  CHECK(actuator_force({lambda_c - 22.0, -2.0, 0.0, 0.0},
                       {0.1, lambda_c, SpringMode::kCompression}) ==
        doctest::Approx(2.0));
  // Stretched beyond the unloaded length: tension.
  CHECK(actuator_force({lambda_c + 1.0, 0.0, 0.0, 0.0},
                       {0.5, lambda_c, SpringMode::kCompression}) ==
        doctest::Approx(-0.5));
}

TEST_CASE("ground force cases") {
  CHECK(ground_force({0.0, 1.0, 0.0, 0.0}, 3.0, 0.5) == 0.0);   // flight
  CHECK(ground_force({0.0, -2.0, 0.0, 0.5}, 3.0, 0.5) == 0.0);  // foot rising
  CHECK(ground_force({0.0, -2.0, 0.0, -0.5}, 3.0, 0.5) ==
        doctest::Approx(2.0));  // yielding
  CHECK(ground_force({0.0, -2.0, 0.0, 0.0}, 1.5, 0.0) ==
        doctest::Approx(1.5));  // static stance pins the foot
  CHECK(ground_force({0.0, -2.0, 0.0, 0.0}, 1.5, 1.0) ==
        doctest::Approx(2.0));

  SUBCASE("nonnegative in stance, zero in flight") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> depth(-5.0, 0.0);
    std::uniform_real_distribution<double> force(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const double xf = depth(rng);
      CHECK(ground_force({0.0, xf, 0.0, -1.0}, force(rng), 0.1) >= 0.0);
    }
  }
}

TEST_CASE("COM kinetic energy") {
  CHECK(com_kinetic_energy({0, 0, 3.0, 3.0}, 0.7) == doctest::Approx(4.5));
  CHECK(com_kinetic_energy({0, 0, 1.0, 0.0}, 0.0) == doctest::Approx(0.5));
  CHECK(com_kinetic_energy({0, 0, 0.0, 1.0}, 1.0) == doctest::Approx(0.125));

  // Invariant under mu when both masses move together.
  for (double mu : {0.0, 0.1, 1.0, 10.0}) {
    CHECK(com_kinetic_energy({0, 0, -2.0, -2.0}, mu) == doctest::Approx(2.0));
  }
}

TEST_CASE("spring_update inverts the controller equations") {
  ModelParams p;
  p.eps_inj = 10.0;
  p.phi = 1.0;
  p.kappa_c = 0.1;
  p.mu = 0.0;
  p.lambda_c = 35.0;
  const LegSpring comp{0.1, 35.0, SpringMode::kCompression};
  // Deflection 20 at depth 2.
  const HopperState ce{13.0, -2.0, 0.0, 0.0};

  const LegSpring ext = spring_update(ce, comp, p);
  CHECK(ext.mode == SpringMode::kExtension);
  CHECK(ext.stiffness == doctest::Approx(4.0 / 60.0).epsilon(1e-12));
  CHECK(ext.unloaded_length - ce.xi_b + ce.xi_f ==
        doctest::Approx(30.0).epsilon(1e-12));
  CHECK(ext.unloaded_length == doctest::Approx(45.0).epsilon(1e-12));

  SUBCASE("zero injection with matching force is the identity update") {
    ModelParams q = p;
    q.eps_inj = 0.0;
    // Pick phi so the commanded force equals the compression-spring force.
    q.phi = 0.1 * 20.0 / 2.0;
    const LegSpring same = spring_update(ce, comp, q);
    CHECK(same.stiffness == doctest::Approx(comp.stiffness).epsilon(1e-12));
    CHECK(same.unloaded_length ==
          doctest::Approx(comp.unloaded_length).epsilon(1e-12));
  }

  SUBCASE("rejects a non-positive commanded leg force") {
    ModelParams q = p;
    q.mu = 2.0;
    q.phi = 0.1;
    const HopperState shallow{34.0, -0.5, 0.0, 0.0};
    CHECK_THROWS_AS(spring_update(shallow, comp, q), std::invalid_argument);
  }
}

TEST_CASE("spring_update round trip over random inputs") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    ModelParams p;
    p.eps_inj = 100.0 * u01(rng);
    p.phi = 0.2 + 3.8 * u01(rng);
    p.kappa_c = std::pow(10.0, -2.0 + 3.0 * u01(rng));
    p.mu = u01(rng) < 0.3 ? 0.0 : std::pow(10.0, -3.0 + 3.0 * u01(rng));
    p.lambda_c = 5.0 + 50.0 * u01(rng);

    HopperState ce;
    ce.xi_f = -(0.5 + 8.0 * u01(rng));
    const double deflection = 0.5 + 30.0 * u01(rng);
    ce.xi_b = p.lambda_c + ce.xi_f - deflection;
    if (-p.phi * ce.xi_f - p.mu / (1.0 + p.mu) <= 1e-6) continue;

    const LegSpring comp{p.kappa_c, p.lambda_c, SpringMode::kCompression};
    const LegSpring ext = spring_update(ce, comp, p);
    const double eps = injected_energy(ce, comp, ext);
    const double phi = force_ratio(ce, ext, p.mu);
    CHECK(eps == doctest::Approx(p.eps_inj).epsilon(1e-10));
    CHECK(phi == doctest::Approx(p.phi).epsilon(1e-10));
  }
}

TEST_CASE("liftoff reset conserves the COM and dissipates per the formula") {
  SUBCASE("massless foot loses nothing") {
    ModelParams p;
    p.mu = 0.0;
    p.lambda_c = 35.0;
    const HopperState s{20.0, -3.0, 2.5, 0.0};
    const LegSpring ext{0.2, 40.0, SpringMode::kExtension};
    const LiftoffResult r = liftoff_reset(s, p, ext);
    CHECK(r.energy_loss == 0.0);
    CHECK(r.state.v_b == doctest::Approx(2.5));
    CHECK(r.state.v_f == doctest::Approx(2.5));
    CHECK(r.state.xi_b - r.state.xi_f == doctest::Approx(35.0));
  }

  SUBCASE("hand-evaluated loss at mu = 1") {
    ModelParams p;
    p.mu = 1.0;
    p.lambda_c = 10.0;
    const HopperState s{10.0, -2.0, 2.0, 0.0};
    const LegSpring ext{1.0, 12.0, SpringMode::kExtension};
    const LiftoffResult r = liftoff_reset(s, p, ext);
    CHECK(r.energy_loss == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(r.state.v_b == doctest::Approx(1.0));
    CHECK(r.state.v_f == doctest::Approx(1.0));
  }

  SUBCASE("loss equals the mechanical energy drop at the liftoff condition") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      ModelParams p;
      p.mu = std::pow(10.0, -3.0 + 3.3 * u01(rng));
      p.lambda_c = 5.0 + 40.0 * u01(rng);
      LegSpring ext;
      ext.mode = SpringMode::kExtension;
      ext.stiffness = std::pow(10.0, -2.0 + 3.0 * u01(rng));
      ext.unloaded_length = p.lambda_c + 10.0 * u01(rng);

      // At liftoff the ground force is zero: the spring carries the foot
      // weight in tension.
      HopperState s;
      s.xi_f = -(0.2 + 4.0 * u01(rng));
      s.xi_b = ext.unloaded_length + s.xi_f +
               p.mu / ((1.0 + p.mu) * ext.stiffness);
      s.v_b = 0.2 + 4.0 * u01(rng);
      s.v_f = 0.0;

      const LiftoffResult r = liftoff_reset(s, p, ext);
      const double before = total_mechanical_energy(s, p.mu, ext);
      const LegSpring comp{1.0, p.lambda_c, SpringMode::kCompression};
      const double after = total_mechanical_energy(r.state, p.mu, comp);
      CHECK(r.energy_loss ==
            doctest::Approx(before - after).epsilon(1e-10));

      // COM position and velocity are conserved exactly.
      const double com_before = (s.xi_b + p.mu * s.xi_f) / (1.0 + p.mu);
      const double com_after =
          (r.state.xi_b + p.mu * r.state.xi_f) / (1.0 + p.mu);
      CHECK(com_before == doctest::Approx(com_after).epsilon(1e-14));
      const double v_before = (s.v_b + p.mu * s.v_f) / (1.0 + p.mu);
      CHECK(r.state.v_b == doctest::Approx(v_before).epsilon(1e-14));
      CHECK(r.state.v_f == r.state.v_b);
      CHECK(r.state.xi_b - r.state.xi_f ==
            doctest::Approx(p.lambda_c).epsilon(1e-12));
    }
  }
}

TEST_CASE("nondimensionalization of the experimental rig") {
  DimensionalSpec spec;
  spec.body_mass = 2.5;
  spec.foot_mass = 0.5;
  spec.ground_stiffness = 4800.0;
  spec.leg_stiffness_c = 1296.0;
  spec.unloaded_leg_length = 0.18;
  spec.gravity = 9.81;

  const NondimResult r = nondimensionalize(spec);
  CHECK(r.mu == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.kappa_c == doctest::Approx(0.27).epsilon(1e-12));
  CHECK(r.scales.length == doctest::Approx(0.006131).epsilon(1e-3));
  CHECK(r.scales.energy == doctest::Approx(0.1805).epsilon(1e-3));

  SUBCASE("zero foot mass gives mu = 0") {
    DimensionalSpec s2 = spec;
    s2.foot_mass = 0.0;
    CHECK(nondimensionalize(s2).mu == 0.0);
  }

  SUBCASE("round trip") {
    const DimensionalSpec back =
        dimensionalize(r.kappa_c, r.mu, r.lambda_c, r.scales);
    CHECK(back.body_mass == doctest::Approx(spec.body_mass).epsilon(1e-12));
    CHECK(back.foot_mass == doctest::Approx(spec.foot_mass).epsilon(1e-12));
    CHECK(back.ground_stiffness ==
          doctest::Approx(spec.ground_stiffness).epsilon(1e-12));
    CHECK(back.leg_stiffness_c ==
          doctest::Approx(spec.leg_stiffness_c).epsilon(1e-12));
    CHECK(back.unloaded_leg_length ==
          doctest::Approx(spec.unloaded_leg_length).epsilon(1e-12));
    CHECK(back.gravity == doctest::Approx(spec.gravity).epsilon(1e-12));
  }

  SUBCASE("rejects bad specs") {
    DimensionalSpec bad = spec;
    bad.ground_stiffness = 0.0;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
    bad = spec;
    bad.body_mass = -1.0;
    CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
  }
}

TEST_CASE("parameter validation and keyed access") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.phi_eff() == 1.0);
  p.phi = 2.5;
  CHECK(p.phi_eff() == 2.5);

  p.kappa_c = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.kappa_c = 0.1;
  p.phi_fric = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  ModelParams q;
  CHECK(set_model_param(q, "eps_inj", 7.0));
  CHECK(set_model_param(q, "mu", 0.25));
  CHECK_FALSE(set_model_param(q, "bogus", 1.0));
  double v = 0.0;
  CHECK(get_model_param(q, "eps_inj", &v));
  CHECK(v == 7.0);
}
