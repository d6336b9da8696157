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

// Embedded Dormand-Prince 5(4) pair with the classic quartic interpolant for
// dense output. Kept minimal: fixed state dimension, caller-driven stepping,
// no stiffness detection. The per-domain hopper dynamics are linear and
// non-stiff, so an explicit pair with dense output is all event location
// needs.

#ifndef HOPMAP_RK45_HPP_
#define HOPMAP_RK45_HPP_

#include <array>
#include <cmath>

namespace hopmap {

template <int N>
class Rk45 {
 public:
  using Vec = std::array<double, N>;

  // One accepted step; holds everything dense evaluation needs.
  struct Step {
    double t0 = 0.0;
    double h = 0.0;
    Vec y0{};
    Vec y1{};
    std::array<Vec, 7> k{};
    double t1() const { return t0 + h; }
  };

  // Attempts a single step of size h from (t, y) with derivative function f.
  // Returns true and fills `step` if the error estimate passes; in both cases
  // `suggested` receives the next step size to try.
  template <typename F>
  static bool try_step(const F& f, double t, const Vec& y, double h,
                       double rel_tol, double abs_tol, Step* step,
                       double* suggested) {
    static constexpr double kA21 = 1.0 / 5;
    static constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
    static constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15,
                            kA43 = 32.0 / 9;
    static constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                            kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
    static constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                            kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                            kA65 = -5103.0 / 18656;
    static constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113,
                            kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                            kB6 = 11.0 / 84;
    // b (5th order) minus b-hat (4th order), used for the error estimate.
    static constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695,
                            kE4 = 71.0 / 1920, kE5 = -17253.0 / 339200,
                            kE6 = 22.0 / 525, kE7 = -1.0 / 40;
    static constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5,
                            kC5 = 8.0 / 9;

    auto& k = step->k;
    Vec tmp;
    f(t, y, &k[0]);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * kA21 * k[0][i];
    f(t + kC2 * h, tmp, &k[1]);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA31 * k[0][i] + kA32 * k[1][i]);
    f(t + kC3 * h, tmp, &k[2]);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA41 * k[0][i] + kA42 * k[1][i] + kA43 * k[2][i]);
    f(t + kC4 * h, tmp, &k[3]);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA51 * k[0][i] + kA52 * k[1][i] + kA53 * k[2][i] +
                           kA54 * k[3][i]);
    f(t + kC5 * h, tmp, &k[4]);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA61 * k[0][i] + kA62 * k[1][i] + kA63 * k[2][i] +
                           kA64 * k[3][i] + kA65 * k[4][i]);
    f(t + h, tmp, &k[5]);
    Vec y1;
    for (int i = 0; i < N; ++i)
      y1[i] = y[i] + h * (kB1 * k[0][i] + kB3 * k[2][i] + kB4 * k[3][i] +
                          kB5 * k[4][i] + kB6 * k[5][i]);
    f(t + h, y1, &k[6]);

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double e = h * (kE1 * k[0][i] + kE3 * k[2][i] + kE4 * k[3][i] +
                            kE5 * k[4][i] + kE6 * k[5][i] + kE7 * k[6][i]);
      const double scale =
          abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      const double r = e / scale;
      err += r * r;
    }
    err = std::sqrt(err / N);

    const double kMinFactor = 0.2, kMaxFactor = 5.0, kSafety = 0.9;
    double factor = kSafety * std::pow(err > 0.0 ? err : 1e-16, -0.2);
    factor = std::min(kMaxFactor, std::max(kMinFactor, factor));
    *suggested = h * factor;

    if (err <= 1.0) {
      step->t0 = t;
      step->h = h;
      step->y0 = y;
      step->y1 = y1;
      return true;
    }
    return false;
  }

  // Quartic interpolant on an accepted step, theta = (t - t0)/h in [0, 1].
  static Vec dense(const Step& s, double t) {
    const double th = (t - s.t0) / s.h;
    const double th2 = th * th, th3 = th2 * th, th4 = th3 * th;
    // Interpolation weights for the Dormand-Prince pair.
    const double b1 = th - 183.0 / 64 * th2 + 37.0 / 12 * th3 -
                      145.0 / 128 * th4;
    const double b3 = 1500.0 / 371 * th2 - 1000.0 / 159 * th3 +
                      1000.0 / 371 * th4;
    const double b4 = -125.0 / 32 * th2 + 125.0 / 12 * th3 - 375.0 / 64 * th4;
    const double b5 = 9477.0 / 3392 * th2 - 729.0 / 106 * th3 +
                      25515.0 / 6784 * th4;
    const double b6 = -11.0 / 7 * th2 + 11.0 / 3 * th3 - 55.0 / 28 * th4;
    const double b7 = 3.0 / 2 * th2 - 4.0 * th3 + 5.0 / 2 * th4;
    Vec out;
    for (int i = 0; i < N; ++i) {
      out[i] = s.y0[i] + s.h * (b1 * s.k[0][i] + b3 * s.k[2][i] +
                                b4 * s.k[3][i] + b5 * s.k[4][i] +
                                b6 * s.k[5][i] + b7 * s.k[6][i]);
    }
    return out;
  }
};

}  // namespace hopmap

#endif  // HOPMAP_RK45_HPP_
