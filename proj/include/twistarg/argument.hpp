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

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "twistarg/contour.hpp"
#include "twistarg/lfunc.hpp"
#include "twistarg/zeros.hpp"

// The argument S(t) = arg L(1/2 + it) / pi by continuous variation from the right,
// its prime-sum main term M and remainder R = S - M, the smoothed von Mangoldt
// weights Lambda_x, and the truncated explicit formula for L'/L.

namespace twistarg {

struct SArgOptions {
  /// Start of the horizontal path; |L - 1| < 1 there, so the principal branch is exact.
  double sigma0 = 3.0;
  UnwrapOptions unwrap;
};

/// S(t, f x chi). NumericError naming sigma if the path passes through a zero.
double s_arg(const TwistedL& L, double t, const SArgOptions& options = {});

struct SArgFamily {
  std::vector<double> S;
  std::vector<bool> failed;
  std::vector<double> fail_sigma;  ///< sigma of the first unresolved step, for failed members
  std::size_t evaluations = 0;
};

/// S(t) for every character in js along one shared path.
SArgFamily s_arg_family(const LKernel& kernel, std::span<const std::uint64_t> js, double t,
                        const SArgOptions& options = {});

/// M(t) = (1/pi) Im sum_{p <= x^3} lambda(p) chi(p) p^{-1/2-it}.
double m_sum(const TwistedL& L, double t, double x);
std::vector<double> m_sum_family(const LKernel& kernel, std::span<const std::uint64_t> js, double t, double x);

/// Lambda_x(n): Lambda(n) up to x, the two quadratic-log tapers on [x, x^2] and [x^2, x^3], 0 beyond.
double lambda_x_weight(std::uint64_t n, double x);

struct PrimePowerTerm {
  std::uint64_t n;
  std::uint64_t p;
  int m;
  double log_n;
  double cf;        ///< C_f(n)
  double lambda_x;  ///< Lambda_x(n)
};

/// Prime powers n <= x^3 with C_f(n) and Lambda_x(n).
std::vector<PrimePowerTerm> prime_power_terms(const HeckeForm& form, double x);

struct LambdaXSumOptions {
  bool divide_by_log = false;  ///< extra 1 / log n
  bool primes_only = false;
  bool plain_von_mangoldt = false;  ///< Lambda(n) in place of Lambda_x(n)
};

/// sum_{n <= x^3} C_f(n) Lambda_x(n) chi(n) n^{-s}, with the variants in `options`.
cplx lambda_x_sum(const TwistedL& L, cplx s, double x, const LambdaXSumOptions& options = {});

/// Largest height offset x^{3/2} / log x a zero can have and still constrain sigma_x.
double sigma_x_reach(double x);

/// 1/2 + 2 max(|beta - 1/2|, 5 / log x) over certified off-line zeros with
/// |t - gamma| <= x^{3|beta - 1/2|} / log x. CoverageError if `zeros` misses the reach window.
double sigma_x_estimate(const TwistedL& L, double t, double x, const ZeroList& zeros);

struct ArgDecomposition {
  double t = 0.0;
  double S = 0.0;
  double M = 0.0;
  double R = 0.0;
  double x = 0.0;
  double sigma_x = 0.0;
  double main_term = 0.0;  ///< (1/pi) Im sum C_f Lambda_x chi / (n^{sigma_x + it} log n)
  double err1 = 0.0;       ///< (sigma_x - 1/2) |sum C_f Lambda_x chi n^{-sigma_x - it}|
  double err2 = 0.0;       ///< (sigma_x - 1/2) log(q (|t| + 3))
  /// Majorants of R: the Lambda_x - Lambda prime sum, the prime-square sum, the sigma-integral
  /// term, (sigma_x - 1/2) log(q (|t| + 3)), and the constant 1.
  std::array<double, 5> r_majorants{};
};

ArgDecomposition approx_s_decomposition(const TwistedL& L, double t, double x, const ZeroList& zeros,
                                        const SArgOptions& options = {});

/// Majorants of R at a given sigma_x (see ArgDecomposition::r_majorants).
std::array<double, 5> r_majorants(const TwistedL& L, double t, double x, double sigma_x);

struct ExplicitFormula {
  cplx lhs;           ///< L'/L(s) from the completed function
  cplx prime_part;    ///< -sum C_f Lambda_x chi n^{-s}
  cplx zero_part;     ///< -(1/log^2 x) sum over listed zeros
  cplx trivial_part;  ///< -(1/log^2 x) sum over -m - kappa, m <= 50
  double residual = 0.0;
  double tail_estimate = 0.0;  ///< bound for zeros outside the window and m > 50
  std::size_t zeros_used = 0;
};

/// L'/L(s) against the three-sum identity with the zero sum restricted to |gamma - Im s| <= window.
/// Requires Re s >= 1.5 and `zeros` covering the window.
ExplicitFormula explicit_formula_residual(const TwistedL& L, cplx s, double x, const ZeroList& zeros,
                                          double window = 10.0);

/// Zeros per unit height near T, used for the tail estimate: (2/pi) log(q sqrt(r) (|T| + kappa + 3)) + 4.
double zero_density_bound(const TwistedL& L, double T);

}  // namespace twistarg
