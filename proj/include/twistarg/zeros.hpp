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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twistarg/contour.hpp"
#include "twistarg/lfunc.hpp"

// Zeros of L(s, f x chi): critical-line scanning, rectangle counts, the
// sin-sinh weighted zero identity, and the character-averaged density count.

namespace twistarg {

struct ZeroScanOptions {
  double step = 0.05;
  double delta_prime = 0.05;  ///< rectangle margin left of the critical line
  double sigma_max = 3.0;
  double bisect_tol = 1e-9;
  int audit_halvings = 2;
  double offline_tol = 1e-6;  ///< |beta - 1/2| below this counts as on the line
  UnwrapOptions unwrap;
};

struct ZeroList {
  std::uint64_t chi_index = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  std::vector<double> ordinates;       ///< critical-line zeros, increasing
  std::vector<long> multiplicity;      ///< 1 from sign changes; higher only after 2-D location
  std::vector<cplx> offline;           ///< certified zeros with |beta - 1/2| > offline_tol
  long rect_count = 0;                 ///< zeros in [1/2 - delta', sigma_max] x [t1, t2]
  double rect_sigma = 0.45;
  double scan_step = 0.0;              ///< final step after audit halvings
  double max_abs_z = 0.0;              ///< largest |Z| at a bisected ordinate
  int nudges = 0;                      ///< window perturbations needed for boundary zeros
  bool audit_ok = false;

  /// True if [a, b] lies inside the scanned window.
  bool covers(double a, double b) const { return a >= t1 && b <= t2; }
};

struct HardyValue {
  double z;     ///< real part of the rotated, normalized completed L-function
  double imag;  ///< imaginary part, ~0 by the functional equation
  double scale; ///< |rotated value|
};

/// e^{-i theta/2} Lambda(1/2 + it) / |Q^s Gamma(s + kappa)|, eps = e^{i theta}.
HardyValue hardy_z_value(const TwistedL& L, double t);
/// Real part only; NumericError if the imaginary part exceeds 1e-8 |value| + 1e-12.
double hardy_z(const TwistedL& L, double t);

ZeroList find_zeros_on_line(const TwistedL& L, double t1, double t2, double step,
                            const ZeroScanOptions& options = {});

struct RectCount {
  long count = 0;
  double raw = 0.0;
  Rect box{};  ///< rectangle actually used (after nudges)
  int nudges = 0;
};

/// Zeros of L in [sigma, sigma_max] x [t1, t2] with multiplicity, by winding number.
RectCount count_zeros_rectangle(const TwistedL& L, double sigma, double sigma_max, double t1, double t2,
                                const UnwrapOptions& options = {});

/// Counts for every character in `js` and every sigma in `sigmas` (increasing), sharing
/// boundary pieces between rectangles and characters. Result[i][c] is for sigmas[i], js[c].
struct FamilyCounts {
  std::vector<std::vector<RectCount>> counts;
  std::size_t evaluations = 0;
  std::size_t recounted = 0;  ///< characters recounted one by one after a boundary failure
};
FamilyCounts count_zeros_family(const std::shared_ptr<const LKernel>& kernel, std::span<const std::uint64_t> js,
                                std::span<const double> sigmas, double sigma_max, double t1, double t2,
                                const UnwrapOptions& options = {});

struct DensityRow {
  double sigma;
  double n_avg;
  bool in_hypothesis_range;  ///< sigma >= 1/2 + 1/log q and t2 - t1 >= 1/log q
  long total;
};

struct DensityTable {
  std::uint64_t q;
  double t1, t2;
  std::vector<DensityRow> rows;
  std::size_t characters;
  int nudges;
  bool monotone;      ///< n_avg non-increasing in sigma
  double fit_slope;   ///< least-squares slope of n_avg against (sigma - 1/2)
};

DensityTable density_table(const std::shared_ptr<const LKernel>& kernel, std::span<const double> sigmas, double t1,
                           double t2, double sigma_max = 3.0, const UnwrapOptions& options = {});

/// Average over all primitive characters of the zero count with beta >= sigma, t1 <= gamma <= t2.
/// DomainError outside sigma >= 1/2 + 1/log q, t2 - t1 >= 1/log q.
double n_avg(const std::shared_ptr<const LKernel>& kernel, double sigma, double t1, double t2);

struct SelbergOptions {
  double quad_tol = 1e-12;
  unsigned max_depth = 10;
  double truncate_below = 1e-12;  ///< integrand size at which the beta-integral is cut
  double panel = 0.25;
  double sigma_limit = 400.0;
  double max_panel_error = 1e-9;
};

struct SelbergCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double sigma_far = 0.0;
  std::size_t zeros_used = 0;
  double quad_error = 0.0;
};

/// Both sides of the sin-sinh weighted identity for omega = 1 + deviation on
/// [sigma', inf) x [t1, t2]. The deviation is passed separately so log|omega| stays
/// accurate where omega is close to 1. `zeros` lists the zeros of omega (repeated by
/// multiplicity); those with beta > sigma' and t1 < gamma < t2 enter the left side.
SelbergCheck selberg_identity_check(const ScalarFn& deviation, std::span<const cplx> zeros, double sigma_prime,
                                    double t1, double t2, const SelbergOptions& options = {});

/// Zeros of 1 + deviation in [sigma', sigma_far] x [t1, t2] by argument-principle subdivision.
std::vector<cplx> omega_zeros(const ScalarFn& deviation, double sigma_prime, double sigma_far, double t1, double t2);

/// Deviation -a b^{-s} of omega(s) = 1 - a b^{-s}.
ScalarFn exponential_deviation(double a, double b);
/// Its zeros log a / log b + 2 pi i k / log b with t1 < gamma < t2.
std::vector<cplx> exponential_omega_zeros(double a, double b, double t1, double t2);
/// Growth normalization log|omega| = o(exp(-pi sigma / (t2 - t1))): log b > pi / (t2 - t1).
bool exponential_growth_ok(double b, double t1, double t2);

}  // namespace twistarg
