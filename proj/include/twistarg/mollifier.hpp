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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "twistarg/contour.hpp"
#include "twistarg/lfunc.hpp"

// The mollifier M(s) = sum_{l <= L} x_l chi(l) l^{-s}, x_l = mu_f(l) P(log(L/l) / log L),
// and the character average of |L M - 1|^2.

namespace twistarg {

/// P(x) = 2x on [0, 1/2], 1 on [1/2, 1].
double taper(double x);

struct MollifierSpec {
  double c = 0.002;
  double length = 1.0;         ///< L actually used
  bool overridden = false;     ///< length set explicitly instead of q^c
  std::vector<double> coeffs;  ///< x_l for l = 0..floor(L); entry 0 unused

  /// L = q^c unless `length_override` is given.
  static MollifierSpec build(const HeckeForm& form, std::uint64_t q, double c,
                             std::optional<double> length_override = {});
  std::uint64_t support() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

cplx m_value(const MollifierSpec& spec, const DirichletCharacter& chi, cplx s);
std::vector<cplx> m_values(const MollifierSpec& spec, const CharacterTable& table, std::span<const std::uint64_t> js,
                           cplx s);

struct DeviationAverage {
  std::uint64_t q;
  double sigma;
  double t;
  double length;
  double average;
  std::size_t count;
};

/// (1 / phi*(q)) sum over primitive chi of |L M (sigma + it) - 1|^2; needs sigma >= 1/2 - 1/log q.
DeviationAverage lm_deviation_average(const MollifierSpec& spec, const std::shared_ptr<const LKernel>& kernel,
                                      double sigma, double t);

/// A priori bound for |L M(s) - 1| at Re s = sigma > 1: sum_{n >= 2} b_n n^{-sigma} with
/// b_n = sum_{d | n, d <= L} |x_d| d(n / d), summed to N and bounded beyond through zeta^4.
double lm_deviation_majorant(const MollifierSpec& spec, const HeckeForm& form, double sigma, std::size_t N = 20000);

/// Dirichlet coefficients of L M: (x * lambda)(n) for n = 0..N, entry 0 unused.
std::vector<double> lm_coefficients(const MollifierSpec& spec, const HeckeForm& form, std::size_t N);

/// s -> -(L M(s) - 1)^2, the deviation of omega = 1 - (L M - 1)^2 from 1. For Re s >= 4
/// L M - 1 is summed from its own Dirichlet series, so it keeps full relative accuracy
/// where it is tiny.
ScalarFn mollified_deviation(const TwistedL& L, const MollifierSpec& spec);

}  // namespace twistarg
