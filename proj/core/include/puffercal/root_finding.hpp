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

#ifndef PUFFERCAL_ROOT_FINDING_HPP_
#define PUFFERCAL_ROOT_FINDING_HPP_

#include <functional>

namespace puffercal {

struct BrentResult {
  double root = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // f(root)
};

// Brent's method on a bracketing interval [lo, hi] with f(lo)*f(hi) <= 0.
// Combines bisection, secant and inverse quadratic interpolation; stops when
// the bracket shrinks below `tol` plus a machine-precision floor, or f hits
// zero. Throws NumericError after max_iter iterations and ValidationError if
// the bracket does not straddle a sign change.
BrentResult brent_root(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int max_iter = 200);

}  // namespace puffercal

#endif  // PUFFERCAL_ROOT_FINDING_HPP_
