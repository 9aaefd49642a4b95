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


#include "twistarg/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "twistarg/errors.hpp"
#include "twistarg/forms.hpp"

namespace twistarg {

double taper(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("taper: {} is outside [0, 1]", x));
  return x <= 0.5 ? 2.0 * x : 1.0;
}

MollifierSpec MollifierSpec::build(const HeckeForm& form, std::uint64_t q, double c,
                                   std::optional<double> length_override) {
  if (!(c > 0.0)) throw ValidationError("mollifier exponent c must be positive");
  MollifierSpec spec;
  spec.c = c;
  spec.overridden = length_override.has_value();
  spec.length = length_override ? *length_override : std::pow(static_cast<double>(q), c);
  if (!(spec.length >= 1.0)) throw ValidationError("mollifier length must be at least 1");
  const auto top = static_cast<std::uint64_t>(std::floor(spec.length));
  if (top > form.n_max()) throw ResourceError("mollifier length exceeds the coefficient table");
  spec.coeffs.assign(top + 1, 0.0);
  spec.coeffs[1] = 1.0;
  const double log_len = std::log(spec.length);
  for (std::uint64_t l = 2; l <= top; ++l) {
    if (std::gcd(l, static_cast<std::uint64_t>(form.level())) != 1) continue;
    double mu = mu_f(form, l);
    if (mu == 0.0) continue;
    double arg = std::clamp(std::log(spec.length / static_cast<double>(l)) / log_len, 0.0, 1.0);
    spec.coeffs[l] = mu * taper(arg);
  }
  return spec;
}

cplx m_value(const MollifierSpec& spec, const DirichletCharacter& chi, cplx s) {
  cplx acc(1.0, 0.0);
  for (std::uint64_t l = 2; l < spec.coeffs.size(); ++l) {
    if (spec.coeffs[l] == 0.0) continue;
    acc += spec.coeffs[l] * chi.value(static_cast<std::int64_t>(l)) * std::exp(-s * std::log(static_cast<double>(l)));
  }
  return acc;
}

std::vector<cplx> m_values(const MollifierSpec& spec, const CharacterTable& table, std::span<const std::uint64_t> js,
                           cplx s) {
  std::vector<std::uint64_t> ns;
  std::vector<cplx> ws;
  for (std::uint64_t l = 1; l < spec.coeffs.size(); ++l) {
    if (spec.coeffs[l] == 0.0) continue;
    ns.push_back(l);
    ws.push_back(spec.coeffs[l] * std::exp(-s * std::log(static_cast<double>(l))));
  }
  return twisted_sums(table, ns, ws, js);
}

DeviationAverage lm_deviation_average(const MollifierSpec& spec, const std::shared_ptr<const LKernel>& kernel,
                                      double sigma, double t) {
  const double q = static_cast<double>(kernel->table().modulus());
  if (sigma < 0.5 - 1.0 / std::log(q)) {
    throw DomainError(fmt::format("lm_deviation_average: sigma must be at least {:.4f}", 0.5 - 1.0 / std::log(q)));
  }
  std::vector<std::uint64_t> js;
  for (std::uint64_t j = 1; j < kernel->table().order(); ++j) js.push_back(j);
  const cplx s(sigma, t);
  auto lv = kernel->evaluate(s, js, Output::L);
  auto mv = m_values(spec, kernel->table(), js, s);
  double acc = 0.0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (!std::isfinite(lv[i].real()) || !std::isfinite(lv[i].imag())) {
      throw NumericError(fmt::format("lm_deviation_average: L value not finite for chi index {}", js[i]));
    }
    acc += std::norm(lv[i] * mv[i] - 1.0);
  }
  return {kernel->table().modulus(), sigma, t, spec.length, acc / static_cast<double>(js.size()), js.size()};
}

double lm_deviation_majorant(const MollifierSpec& spec, const HeckeForm& form, double sigma, std::size_t N) {
  if (!(sigma > 1.0)) throw DomainError("lm_deviation_majorant needs sigma > 1");
  N = std::min<std::size_t>(N, form.n_max());
  std::vector<double> b(N + 1, 0.0);
  for (std::uint64_t d = 1; d < spec.coeffs.size() && d <= N; ++d) {
    const double xd = std::abs(spec.coeffs[d]);
    if (xd == 0.0) continue;
    for (std::uint64_t m = 1; d * m <= N; ++m) {
      b[d * m] += xd * static_cast<double>(m == 1 ? 1 : form.sieve().divisor_count(m));
    }
  }
  double acc = 0.0;
  const auto root = static_cast<std::uint64_t>(std::floor(std::sqrt(spec.length)));
  // Coefficients of L M - 1 vanish for 2 <= n <= sqrt(L): every divisor has full taper.
  for (std::uint64_t n = std::max<std::uint64_t>(2, root + 1); n <= N; ++n) {
    acc += b[n] * std::pow(static_cast<double>(n), -sigma);
  }
  // |x_d| <= d(d), so b_n <= tau_4(n) and sum_{n > N} tau_4(n) n^{-sigma} <= N^{a - sigma} zeta(a)^4.
  double best = HUGE_VAL;
  for (int k = 1; k < 100; ++k) {
    double a = 1.0 + (sigma - 1.0) * k / 100.0;
    double z = 1.0 + 1.0 / (a - 1.0);
    best = std::min(best, std::pow(static_cast<double>(N), a - sigma) * z * z * z * z);
  }
  return acc + best;
}

std::vector<double> lm_coefficients(const MollifierSpec& spec, const HeckeForm& form, std::size_t N) {
  if (N > form.n_max()) throw ResourceError("lm_coefficients: N exceeds the coefficient table");
  std::vector<double> c(N + 1, 0.0);
  for (std::uint64_t d = 1; d < spec.coeffs.size() && d <= N; ++d) {
    if (spec.coeffs[d] == 0.0) continue;
    for (std::uint64_t m = 1; d * m <= N; ++m) c[d * m] += spec.coeffs[d] * form.lambda(m);
  }
  return c;
}

ScalarFn mollified_deviation(const TwistedL& L, const MollifierSpec& spec) {
  auto chi = L.chi();
  const std::size_t N = std::min<std::size_t>(20000, L.kernel().form().n_max());
  auto coeffs = std::make_shared<const std::vector<double>>(lm_coefficients(spec, L.kernel().form(), N));
  return [L, spec, chi, coeffs](cplx s) {
    cplx d(0.0, 0.0);
    if (s.real() >= 4.0) {
      for (std::size_t n = coeffs->size(); n-- > 2;) {
        double c = (*coeffs)[n];
        if (c != 0.0) d += c * chi.value(static_cast<std::int64_t>(n)) * std::exp(-s * std::log(static_cast<double>(n)));
      }
    } else {
      d = l_value(L, s) * m_value(spec, chi, s) - 1.0;
    }
    return -(d * d);
  };
}

}  // namespace twistarg
