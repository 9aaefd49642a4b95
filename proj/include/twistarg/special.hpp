// Copyright 2026 The twistarg Authors
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


#pragma once

#include <complex>

// Complex gamma-family functions used by the L-function evaluator.

namespace twistarg {

using cplx = std::complex<double>;

/// A branch of log Gamma(z); exp(log_gamma(z)) = Gamma(z). Continuous on Re z >= 1/2.
cplx log_gamma(cplx z);
cplx gamma(cplx z);
cplx digamma(cplx z);

/// Upper incomplete gamma Gamma(w, z) = int_z^infty e^{-u} u^{w-1} du along the ray
/// through z, for complex w and Re z > 0 (z = 0 gives Gamma(w)).
cplx upper_gamma(cplx w, cplx z);

/// log of the real upper incomplete gamma Gamma(a, y) for real a and y > 0,
/// bounded from above (exact to a factor <= 2 for y >= 2(a - 1)).
double log_upper_gamma_bound(double a, double y);

}  // namespace twistarg
