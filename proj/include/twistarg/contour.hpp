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
#include <cstddef>
#include <functional>
#include <vector>

// Continuous argument of a family of analytic functions along straight segments,
// and argument-principle zero counting / location built on it.

namespace twistarg {

using cplx = std::complex<double>;

/// Evaluates every member of the family at one point.
using FamilyFn = std::function<std::vector<cplx>(cplx)>;

struct UnwrapOptions {
  /// Largest accepted phase increment between neighbouring samples.
  double max_jump = 0.7853981633974483;  // pi / 4
  /// Intervals shorter than this are not split further.
  double min_step = 1e-7;
  int initial_intervals = 8;
  /// Initial samples are at most this far apart, so a full turn cannot hide between them.
  double max_step = 0.1;
};

struct PhaseTrack {
  std::vector<double> delta;     ///< total continuous change of arg along the path
  std::vector<bool> failed;      ///< phase jump unresolved at min_step (zero on or near the path)
  std::vector<double> fail_at;   ///< parameter in [0, 1] of the first unresolved interval
  std::size_t evaluations = 0;
};

/// Unwraps arg f along the segment a -> b; fa, fb are the family values at the ends.
PhaseTrack unwrap_segment(const FamilyFn& f, cplx a, cplx b, const std::vector<cplx>& fa,
                          const std::vector<cplx>& fb, const UnwrapOptions& options = {});

/// Sum of two tracks along consecutive segments.
PhaseTrack join(const PhaseTrack& first, const PhaseTrack& second);

struct Rect {
  double sigma0, sigma1, t0, t1;
};

struct WindingResult {
  std::vector<double> raw;       ///< change of arg / 2 pi, before rounding
  std::vector<long> count;       ///< rounded
  std::vector<bool> failed;      ///< boundary phase unresolved or raw not within 0.05 of an integer
  std::size_t evaluations = 0;
};

/// Winding number of each family member around the positively oriented rectangle.
WindingResult winding_numbers(const FamilyFn& f, const Rect& r, const UnwrapOptions& options = {});

/// Scalar convenience wrapper.
using ScalarFn = std::function<cplx(cplx)>;
FamilyFn as_family(ScalarFn f);

struct LocatedZero {
  cplx z;
  long multiplicity;
  double box_size;  ///< side of the last box certified by winding number
};

/// All zeros inside r, by recursive argument-principle subdivision followed by
/// Newton-secant polishing. Throws NumericError if a sub-box boundary cannot be resolved.
std::vector<LocatedZero> locate_zeros(const ScalarFn& f, const Rect& r, double tolerance = 1e-10,
                                      const UnwrapOptions& options = {});

}  // namespace twistarg
