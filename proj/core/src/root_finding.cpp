//
// Copyright 2026 The Puffercal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "puffercal/root_finding.hpp"

#include <cmath>
#include <limits>

#include "puffercal/errors.hpp"

namespace puffercal {

BrentResult brent_root(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if ((fa > 0.0 && fb > 0.0) || (fa < 0.0 && fb < 0.0)) {
    throw ValidationError("brent_root: bracket does not straddle a root");
  }

  BrentResult result;
  result.bracket_lo = lo;
  result.bracket_hi = hi;

  double c = a, fc = fa;
  double d = b - a, e = d;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) {
      result.root = b;
      result.residual = fb;
      return result;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, secant when only two points differ
      const double s = fb / fa;
      double pp, qq;
      if (a == c) {
        pp = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {
        const double q1 = fa / fc;
        const double r = fb / fc;
        pp = s * (2.0 * xm * q1 * (q1 - r) - (b - a) * (r - 1.0));
        qq = (q1 - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq;
      pp = std::abs(pp);
      const double min1 = 3.0 * xm * qq - std::abs(tol1 * qq);
      const double min2 = std::abs(e * qq);
      if (2.0 * pp < std::min(min1, min2)) {
        e = d;
        d = pp / qq;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > tol1) {
      b += d;
    } else {
      b += xm >= 0.0 ? tol1 : -tol1;
    }
    fb = f(b);
  }
  throw NumericError("brent_root: no convergence after max iterations");
}

}  // namespace puffercal
