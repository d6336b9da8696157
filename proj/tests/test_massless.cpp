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
#include "hopmap/massless.hpp"

using namespace hopmap;
using namespace hopmap::massless;

namespace {

ModelParams params(double eps_inj, double phi, double kappa_c) {
  ModelParams p;
  p.eps_inj = eps_inj;
  p.phi = phi;
  p.kappa_c = kappa_c;
  p.mu = 0.0;
  return p;
}

// Independent closed-form inversion for phi <= 1, where the loss reduces to
// half the squared pre-injection depth.
double fixed_point_oracle_phi_le_one(double eps_inj, double kappa_c) {
  const double kappa_eq = kappa_c / (1.0 + kappa_c);
  return (eps_inj - std::sqrt(2.0 * eps_inj)) / kappa_eq;
}

double eigenvalue_oracle_phi_le_one(double eps_star, double kappa_c) {
  const double kappa_eq = kappa_c / (1.0 + kappa_c);
  const double s = std::sqrt(1.0 + 2.0 * kappa_eq * eps_star);
  return 1.0 - (1.0 + s) * kappa_eq / s;
}

double central_difference(const ModelParams& p, double eps, double h) {
  return (map_eval(eps + h, p) - map_eval(eps - h, p)) / (2.0 * h);
}

std::mt19937& rng() {
  static std::mt19937 gen(20260810);
  return gen;
}

ModelParams random_params() {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  return params(std::pow(10.0, -1.0 + 3.0 * u01(rng())),
                0.25 + 3.75 * u01(rng()),
                std::pow(10.0, -2.0 + 3.0 * u01(rng())));
}

}  // namespace

TEST_CASE("pre-injection depth") {
  CHECK(pre_injection_depth(0.0, 0.1) == doctest::Approx(-2.0));
  CHECK(pre_injection_depth(0.0, 7.3) == doctest::Approx(-2.0));
  CHECK(pre_injection_depth(10.0, 0.1) ==
        doctest::Approx(-2.67874).epsilon(1e-5));
  CHECK(pre_injection_depth(60.8065, 0.1) ==
        doctest::Approx(-4.47214).epsilon(1e-5));
}

TEST_CASE("depth ratio") {
  CHECK(depth_ratio(-3.0, params(10, 0.7, 0.1)) == doctest::Approx(1.0));
  CHECK(depth_ratio(-3.0, params(10, 1.0, 0.1)) == doctest::Approx(1.0));
  // kappa_c -> 0 limit approaches 2 phi_eff - 1.
  CHECK(depth_ratio(-2.5, params(10, 2.0, 1e-9)) ==
        doctest::Approx(3.0).epsilon(1e-6));
  CHECK(depth_ratio(-2.0, params(10, 2.0, 0.1)) ==
        doctest::Approx(19.6 / 7.6).epsilon(1e-12));
}

TEST_CASE("depth ratio agrees with the controller-derived overshoot") {
  // Independent route: install the actual extension spring and overshoot
  // the series-spring equilibrium.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p = random_params();
    if (p.phi < 1.0) p.phi = 1.0 + 3.0 * u01(rng());
    const double xi_minus = -(2.0 + 6.0 * u01(rng()));
    const double equilibrium = extension_equilibrium_depth(xi_minus, p);
    const double overshoot = 2.0 * equilibrium - xi_minus;
    CHECK(depth_ratio(xi_minus, p) * xi_minus ==
          doctest::Approx(overshoot).epsilon(1e-11));
  }
}

TEST_CASE("map evaluation") {
  // Failed hop from rest when the injection cannot cover the reyield loss.
  CHECK(map_eval(0.0, params(10, 2, 0.1)) ==
        doctest::Approx(-3.302).epsilon(1e-3));
  // Fixed point of the phi <= 1 map.
  const double star = fixed_point_oracle_phi_le_one(10.0, 0.1);
  CHECK(star == doctest::Approx(60.8065).epsilon(1e-5));
  CHECK(map_eval(star, params(10, 1, 0.1)) ==
        doctest::Approx(star).epsilon(1e-12));
  // Minimum viable gait from rest: eps_inj = 2 maps rest to rest.
  CHECK(map_eval(0.0, params(2, 1, 0.1)) == doctest::Approx(0.0));
  CHECK(map_eval(0.0, params(2, 0.4, 3.0)) == doctest::Approx(0.0));
}

TEST_CASE("map matches the coefficient form") {
  // The loss can be written either through the depth ratio or through the
  // (a, b, c, d) rational form; they must agree.
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = random_params();
    const MapCoefficients k = MapCoefficients::from(p);
    std::uniform_real_distribution<double> ue(0.0, 100.0);
    const double eps = ue(rng());
    const double xi = pre_injection_depth(eps, p.kappa_c);
    const double g = (k.a * xi * xi * xi + k.c * xi) /
                     (k.b * xi * xi + k.d);
    const double expected = eps + p.eps_inj - p.eps_inj * g * g;
    CHECK(map_eval(eps, p) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fixed points") {
  // phi <= 1 closed-form inversion oracle.
  for (double phi : {0.5, 0.8, 1.0}) {
    for (double eps_inj : {3.0, 10.0, 40.0}) {
      for (double kappa_c : {0.05, 0.1, 1.0, 5.0}) {
        const double expect = fixed_point_oracle_phi_le_one(eps_inj, kappa_c);
        CHECK(fixed_point(params(eps_inj, phi, kappa_c)) ==
              doctest::Approx(expect).epsilon(1e-10));
      }
    }
  }
  CHECK(fixed_point(params(10, 1, 0.1)) ==
        doctest::Approx(60.8065).epsilon(1e-5));
  // Surface points of the constant-fixed-point analysis.
  CHECK(fixed_point(params(12.84, 1.52, 0.1)) ==
        doctest::Approx(10.0).epsilon(0.015));
  CHECK(fixed_point(params(19, 2.235, 0.1)) ==
        doctest::Approx(1.04).epsilon(0.02));

  SUBCASE("no gait below the existence boundary") {
    CHECK_THROWS_AS(fixed_point(params(1.0, 0.8, 0.1)), NoGaitError);
    CHECK_THROWS_AS(fixed_point(params(10.0, 2.5, 0.1)), NoGaitError);
  }

  SUBCASE("fixed-point consistency") {
    for (int i = 0; i < 300; ++i) {
      const ModelParams p = random_params();
      try {
        const double star = fixed_point(p);
        CHECK(std::fabs(map_eval(star, p) - star) < 1e-9);
      } catch (const NoGaitError&) {
        // Below the boundary; nothing to check.
      }
    }
  }
}

TEST_CASE("eigenvalues") {
  {
    const ModelParams p = params(10, 1, 0.1);
    const double star = fixed_point(p);
    CHECK(eigenvalue(p, star) ==
          doctest::Approx(eigenvalue_oracle_phi_le_one(star, 0.1))
              .epsilon(1e-12));
    CHECK(eigenvalue(p, star) == doctest::Approx(0.8829).epsilon(1e-4));
  }
  {
    const ModelParams p = params(19, 2.235, 0.1);
    const double star = fixed_point(p);
    CHECK(eigenvalue(p, star) == doctest::Approx(-0.32).epsilon(0.02));
  }

  SUBCASE("analytic slope matches central differences") {
    std::uniform_real_distribution<double> ue(0.1, 80.0);
    for (int i = 0; i < 500; ++i) {
      const ModelParams p = random_params();
      const double eps = ue(rng());
      const double fd = central_difference(p, eps, 1e-5 * std::max(1.0, eps));
      CHECK(std::fabs(map_slope(eps, p) - fd) < 1e-6);
    }
  }
}

TEST_CASE("minimum injected energy") {
  CHECK(min_injected_energy(0.7, 0.3) == 2.0);
  CHECK(min_injected_energy(1.0, 10.0) == 2.0);
  CHECK(min_injected_energy(2.0, 0.25) == doctest::Approx(11.7).epsilon(0.01));
  // Continuity at the cusp.
  CHECK(min_injected_energy(1.0 + 1e-9, 0.5) ==
        doctest::Approx(2.0).epsilon(1e-6));

  SUBCASE("boundary values map rest onto itself") {
    std::uniform_real_distribution<double> uphi(1.0, 4.0);
    std::uniform_real_distribution<double> ukc(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double phi = uphi(rng());
      const double kappa_c = std::pow(10.0, -2.0 + 3.0 * ukc(rng()));
      const double e_min = min_injected_energy(phi, kappa_c);
      CHECK(map_eval(0.0, params(e_min, phi, kappa_c)) ==
            doctest::Approx(0.0).epsilon(1e-8));
    }
  }

  SUBCASE("monotone in phi, decreasing in kappa_c") {
    CHECK(min_injected_energy(3.0, 0.25) > min_injected_energy(2.0, 0.25));
    CHECK(min_injected_energy(2.0, 1.0) < min_injected_energy(2.0, 0.25));
  }
}

TEST_CASE("monotone loss (all parameters, dense energy grid)") {
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = random_params();
    double prev = energy_loss(0.0, p);
    for (int j = 1; j <= 200; ++j) {
      const double eps = 100.0 * j / 200.0;
      const double cur = energy_loss(eps, p);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("map slope stays below one") {
  std::uniform_real_distribution<double> ue(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = random_params();
    for (int j = 0; j < 20; ++j) {
      CHECK(map_slope(ue(rng()), p) < 1.0);
    }
  }
}

TEST_CASE("fixed-point cubic has a single real root") {
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p = random_params();
    const MapCoefficients k = MapCoefficients::from(p);
    CHECK(k.a > 0.0);
    CHECK(k.b > 0.0);
    CHECK(k.c > 0.0);
    CHECK(k.d > 0.0);
    CHECK(k.cubic_discriminant() < 0.0);
  }
}

TEST_CASE("map is decreasing then increasing") {
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = random_params();
    const MapMinimum m = map_minimum(p);
    CHECK(map_slope(m.eps_td + 1e-6, p) >= -1e-9);
    if (m.eps_td > 0.0) {
      const double slack = 1e-9 * std::max(1.0, std::fabs(m.value));
      CHECK(map_slope(std::max(0.0, m.eps_td - 1e-6), p) <= 1e-9);
      CHECK(map_eval(m.eps_td, p) <=
            map_eval(std::max(0.0, m.eps_td - 1.0), p) + slack);
      CHECK(map_eval(m.eps_td, p) <= map_eval(m.eps_td + 1.0, p) + slack);
    }
  }
}

TEST_CASE("cusp at phi = 1") {
  std::uniform_real_distribution<double> ue(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double eps = ue(rng());
    // Independent of phi at or below one, continuous just above.
    const double at_one = map_eval(eps, params(8, 1.0, 0.3));
    CHECK(map_eval(eps, params(8, 0.3, 0.3)) == doctest::Approx(at_one));
    CHECK(map_eval(eps, params(8, 0.9, 0.3)) == doctest::Approx(at_one));
    CHECK(map_eval(eps, params(8, 1.0 + 1e-10, 0.3)) ==
          doctest::Approx(at_one).epsilon(1e-8));
  }
}

TEST_CASE("gait metrics") {
  {
    const GaitAnalysis g = gait_metrics(params(10, 1, 0.1));
    CHECK(g.fixed_point == doctest::Approx(60.8065).epsilon(1e-5));
    CHECK(g.efficiency == doctest::Approx(0.8588).epsilon(1e-3));
    CHECK(g.stability_margin == doctest::Approx(0.2205).epsilon(1e-3));
    CHECK(g.globally_stable);
  }
  {
    // Oscillatory fixed point with a negative map minimum: banded basin.
    const GaitAnalysis g = gait_metrics(params(19, 2.235, 0.1));
    CHECK(g.eigenvalue == doctest::Approx(-0.32).epsilon(0.02));
    CHECK_FALSE(g.globally_stable);
  }
  {
    // eta = eps*/(eps_inj + eps*) exactly.
    const ModelParams p = params(14, 1.3, 0.4);
    const GaitAnalysis g = gait_metrics(p);
    CHECK(g.efficiency ==
          doctest::Approx(g.fixed_point / (p.eps_inj + g.fixed_point))
              .epsilon(1e-14));
    CHECK(g.stability_margin ==
          doctest::Approx(1.0 - g.eigenvalue * g.eigenvalue).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gait_metrics(params(1.2, 0.9, 0.2)), NoGaitError);
}
