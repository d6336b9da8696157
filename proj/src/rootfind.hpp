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

// Internal scalar root bracketing helpers shared by the closed-form map and
// the numeric map analysis.

#ifndef HOPMAP_SRC_ROOTFIND_HPP_
#define HOPMAP_SRC_ROOTFIND_HPP_

#include <cmath>
#include <utility>

#include "hopmap/types.hpp"

namespace hopmap::detail {

// Brent's method on [lo, hi]; requires f(lo) and f(hi) of opposite sign
// (either may be zero). Converges to |hi - lo| <= xtol.
template <typename F>
double brent(const F& f, double lo, double hi, double f_lo, double f_hi,
             double xtol, int max_iter = 200) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (f_lo * f_hi > 0.0) {
    throw NumericError("brent: root not bracketed");
  }
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;
    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = m; e = m;  // bisection
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q),
                             std::fabs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
  }
  return b;
}

template <typename F>
double brent(const F& f, double lo, double hi, double xtol,
             int max_iter = 200) {
  return brent(f, lo, hi, f(lo), f(hi), xtol, max_iter);
}

// Plain bisection on a predicate that is false at lo and true at hi;
// returns the boundary to within xtol. Useful when only a sign-like test is
// available (for example "this hop fails").
template <typename Pred>
double bisect_boundary(const Pred& is_true, double lo, double hi,
                       double xtol, int max_iter = 200) {
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (is_true(mid)) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hopmap::detail

#endif  // HOPMAP_SRC_ROOTFIND_HPP_
