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


#include "twistarg/argument.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t cube_floor(double x) {
  // Guard against x^3 landing a hair below an integer.
  return static_cast<std::uint64_t>(std::floor(x * x * x * (1.0 + 1e-12)));
}

void check_x(double x) {
  if (!(x >= 4.0)) throw DomainError(fmt::format("cutoff parameter x = {} must be at least 4", x));
}

double von_mangoldt_trial(std::uint64_t n) {
  if (n < 2) return 0.0;
  std::uint64_t p = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

double lambda_x_factor(double log_n, double x) {
  const double lx = std::log(x);
  if (log_n <= lx) return 1.0;
  const double a = 3.0 * lx - log_n;
  if (log_n <= 2.0 * lx) {
    const double b = 2.0 * lx - log_n;
    return (a * a - 2.0 * b * b) / (2.0 * lx * lx);
  }
  if (log_n < 3.0 * lx) return a * a / (2.0 * lx * lx);
  return 0.0;
}

}  // namespace

SArgFamily s_arg_family(const LKernel& kernel, std::span<const std::uint64_t> js, double t,
                        const SArgOptions& options) {
  if (t == 0.0) throw DomainError("s_arg: t must be nonzero");
  if (!(options.sigma0 >= 3.0)) throw DomainError("s_arg: path must start at sigma >= 3");
  std::vector<std::uint64_t> idx(js.begin(), js.end());
  FamilyFn f = [&kernel, &idx](cplx s) { return kernel.evaluate(s, idx, Output::L); };
  const cplx a(options.sigma0, t);
  const cplx b(0.5, t);
  auto fa = f(a);
  auto fb = f(b);
  PhaseTrack track = unwrap_segment(f, a, b, fa, fb, options.unwrap);
  SArgFamily out;
  out.evaluations = track.evaluations + 2;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    bool bad = track.failed[c] || fb[c] == 0.0;
    out.S.push_back((std::arg(fa[c]) + track.delta[c]) / kPi);
    out.failed.push_back(bad);
    out.fail_sigma.push_back(bad ? options.sigma0 - std::max(0.0, track.fail_at[c]) * (options.sigma0 - 0.5) : 0.0);
  }
  return out;
}

double s_arg(const TwistedL& L, double t, const SArgOptions& options) {
  std::uint64_t j = L.index();
  auto r = s_arg_family(L.kernel(), std::span<const std::uint64_t>(&j, 1), t, options);
  if (r.failed[0]) {
    throw NumericError(fmt::format("s_arg: zero on or near the path at sigma = {:.9f}, t = {} (chi index {})",
                                   r.fail_sigma[0], t, j));
  }
  return r.S[0];
}

double m_sum(const TwistedL& L, double t, double x) {
  std::uint64_t j = L.index();
  return m_sum_family(L.kernel(), std::span<const std::uint64_t>(&j, 1), t, x)[0];
}

std::vector<double> m_sum_family(const LKernel& kernel, std::span<const std::uint64_t> js, double t, double x) {
  const auto& form = kernel.form();
  const std::uint64_t X3 = cube_floor(x);
  if (X3 > form.n_max()) throw ResourceError(fmt::format("m_sum: x^3 = {} exceeds the coefficient table", X3));
  auto primes = form.sieve().primes_up_to(X3);
  std::vector<cplx> ws;
  ws.reserve(primes.size());
  for (auto p : primes) {
    double lp = std::log(static_cast<double>(p));
    ws.push_back(form.lambda(p) * std::exp(-cplx(0.5, t) * lp));
  }
  auto sums = twisted_sums(kernel.table(), primes, ws, js);
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& v : sums) out.push_back(v.imag() / kPi);
  return out;
}

double lambda_x_weight(std::uint64_t n, double x) {
  check_x(x);
  double vm = von_mangoldt_trial(n);
  if (vm == 0.0) return 0.0;
  return vm * lambda_x_factor(std::log(static_cast<double>(n)), x);
}

std::vector<PrimePowerTerm> prime_power_terms(const HeckeForm& form, double x) {
  check_x(x);
  const std::uint64_t X3 = cube_floor(x);
  if (X3 > form.n_max()) throw ResourceError(fmt::format("x^3 = {} exceeds the coefficient table", X3));
  std::vector<PrimePowerTerm> out;
  for (auto p : form.sieve().primes_up_to(X3)) {
    const double lp = std::log(static_cast<double>(p));
    std::uint64_t n = p;
    for (int m = 1;; ++m) {
      const double ln = m * lp;
      out.push_back({n, p, m, ln, cf_coefficient(form, n), lp * lambda_x_factor(ln, x)});
      if (n > X3 / p) break;
      n *= p;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

cplx lambda_x_sum(const TwistedL& L, cplx s, double x, const LambdaXSumOptions& options) {
  auto chi = L.chi();
  cplx acc(0.0, 0.0);
  for (const auto& term : prime_power_terms(L.kernel().form(), x)) {
    if (options.primes_only && term.m != 1) continue;
    double w = options.plain_von_mangoldt ? std::log(static_cast<double>(term.p)) : term.lambda_x;
    if (w == 0.0 || term.cf == 0.0) continue;
    cplx v = term.cf * w * chi.value(static_cast<std::int64_t>(term.n)) * std::exp(-s * term.log_n);
    if (options.divide_by_log) v /= term.log_n;
    acc += v;
  }
  return acc;
}

double sigma_x_reach(double x) { return std::pow(x, 1.5) / std::log(x); }

double sigma_x_estimate(const TwistedL& L, double t, double x, const ZeroList& zeros) {
  check_x(x);
  if (zeros.chi_index != L.index()) throw ValidationError("sigma_x_estimate: zero list belongs to another character");
  const double reach = sigma_x_reach(x);
  if (!zeros.covers(t - reach, t + reach)) {
    throw CoverageError(fmt::format("sigma_x_estimate: zeros cover [{}, {}] but [{}, {}] is needed", zeros.t1,
                                    zeros.t2, t - reach, t + reach));
  }
  const double lx = std::log(x);
  double mx = 5.0 / lx;
  for (cplx rho : zeros.offline) {
    double d = std::abs(rho.real() - 0.5);
    if (std::abs(t - rho.imag()) <= std::pow(x, 3.0 * d) / lx) mx = std::max(mx, d);
  }
  return 0.5 + 2.0 * mx;
}

std::array<double, 5> r_majorants(const TwistedL& L, double t, double x, double sigma_x) {
  const auto terms = prime_power_terms(L.kernel().form(), x);
  auto chi = L.chi();
  const double lx = std::log(x);
  cplx g1(0.0, 0.0);
  cplx g2(0.0, 0.0);
  std::vector<const PrimePowerTerm*> primes;
  double bound = 0.0;
  for (const auto& term : terms) {
    const double lp = std::log(static_cast<double>(term.p));
    cplx cv = chi.value(static_cast<std::int64_t>(term.n));
    if (term.m == 1) {
      g1 += term.cf * (term.lambda_x - lp) * cv * std::exp(-cplx(0.5, t) * lp) / lp;
      primes.push_back(&term);
      bound += std::abs(term.cf * term.lambda_x) * (lx + lp) / std::sqrt(static_cast<double>(term.p));
    } else if (term.m == 2) {
      g2 += term.cf * term.lambda_x * cv * std::exp(-cplx(1.0, 2.0 * t) * lp) / lp;
    }
  }
  auto integrand = [&](double sigma) {
    cplx acc(0.0, 0.0);
    for (const auto* term : primes) {
      const double lp = term->log_n;
      acc += term->cf * term->lambda_x * chi.value(static_cast<std::int64_t>(term->p)) * (lx + lp) *
             std::exp(-cplx(sigma, t) * lp);
    }
    return std::exp((0.5 - sigma) * lx) * std::abs(acc);
  };
  // The integrand is below (2x)^{1/2 - sigma} * bound; stop once that is negligible.
  double upper = 0.5 + std::max(1.0, std::log(std::max(bound, 1.0) / 1e-14) / std::log(2.0 * x));
  double integral = 0.0;
  const int panels = static_cast<int>(std::ceil(upper - 0.5));
  for (int k = 0; k < panels; ++k) {
    double a = 0.5 + (upper - 0.5) * k / panels;
    double b = 0.5 + (upper - 0.5) * (k + 1) / panels;
    integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 10, 1e-12);
  }
  const double q = static_cast<double>(L.modulus());
  const double dx = sigma_x - 0.5;
  return {std::abs(g1.imag()), std::abs(g2.imag()), dx * std::exp(dx * lx) * integral,
          dx * std::log(q * (std::abs(t) + 3.0)), 1.0};
}

ArgDecomposition approx_s_decomposition(const TwistedL& L, double t, double x, const ZeroList& zeros,
                                        const SArgOptions& options) {
  if (t == 0.0) throw DomainError("approx_s_decomposition: t must be nonzero");
  check_x(x);
  ArgDecomposition d;
  d.t = t;
  d.x = x;
  d.sigma_x = sigma_x_estimate(L, t, x, zeros);
  d.S = s_arg(L, t, options);
  d.M = m_sum(L, t, x);
  d.R = d.S - d.M;
  const cplx sx(d.sigma_x, t);
  d.main_term = lambda_x_sum(L, sx, x, {.divide_by_log = true}).imag() / kPi;
  d.err1 = (d.sigma_x - 0.5) * std::abs(lambda_x_sum(L, sx, x));
  d.err2 = (d.sigma_x - 0.5) * std::log(static_cast<double>(L.modulus()) * (std::abs(t) + 3.0));
  d.r_majorants = r_majorants(L, t, x, d.sigma_x);
  return d;
}

double zero_density_bound(const TwistedL& L, double T) {
  const double cond = static_cast<double>(L.modulus()) * std::sqrt(static_cast<double>(L.kernel().form().level()));
  return 2.0 / kPi * std::log(cond * (std::abs(T) + L.kappa() + 3.0)) + 4.0;
}

ExplicitFormula explicit_formula_residual(const TwistedL& L, cplx s, double x, const ZeroList& zeros, double window) {
  check_x(x);
  const double sigma = s.real();
  const double t = s.imag();
  if (sigma < 1.5) throw DomainError("explicit_formula_residual: needs Re s >= 1.5");
  if (zeros.chi_index != L.index()) throw ValidationError("explicit_formula_residual: zero list belongs to another character");
  if (!zeros.covers(t - window, t + window)) {
    throw CoverageError(fmt::format("explicit_formula_residual: zeros cover [{}, {}] but [{}, {}] is needed", zeros.t1,
                                    zeros.t2, t - window, t + window));
  }
  const double lx = std::log(x);
  const double l2 = lx * lx;
  auto term = [&](cplx rho) {
    cplx e = std::exp((rho - s) * lx);
    cplx d = rho - s;
    return e * (1.0 - e) * (1.0 - e) / (d * d * d);
  };
  ExplicitFormula out{};
  out.lhs = log_derivative(L, s);
  out.prime_part = -lambda_x_sum(L, s, x);

  cplx zsum(0.0, 0.0);
  for (std::size_t i = 0; i < zeros.ordinates.size(); ++i) {
    double g = zeros.ordinates[i];
    if (std::abs(g - t) > window) continue;
    zsum += static_cast<double>(zeros.multiplicity[i]) * term({0.5, g});
    out.zeros_used += static_cast<std::size_t>(zeros.multiplicity[i]);
  }
  for (cplx rho : zeros.offline) {
    if (std::abs(rho.imag() - t) > window) continue;
    zsum += term(rho);
    ++out.zeros_used;
    cplx mirror(1.0 - rho.real(), rho.imag());
    if (mirror.real() < zeros.rect_sigma) {
      zsum += term(mirror);
      ++out.zeros_used;
    }
  }
  out.zero_part = -zsum / l2;

  cplx tsum(0.0, 0.0);
  for (int m = 0; m <= 50; ++m) tsum += term(cplx(-m - L.kappa(), 0.0));
  out.trivial_part = -tsum / l2;

  out.residual = std::abs(out.lhs - (out.prime_part + out.zero_part + out.trivial_part));

  // Zeros beyond the window: |x^{rho-s}| <= x^{1-sigma}, |rho - s| >= |gamma - t|.
  const double a = std::exp((1.0 - sigma) * lx);
  const double per = a * (1.0 + a) * (1.0 + a);
  double tail = 0.0;
  for (int k = 0; k < 100000; ++k) {
    double h = window + k;
    tail += (zero_density_bound(L, t + h + 1.0) + zero_density_bound(L, t - h - 1.0)) * per / (h * h * h);
  }
  double far = window + 100000.0;
  tail += 2.0 * zero_density_bound(L, std::abs(t) + far) * per / (2.0 * far * far);
  // Trivial zeros beyond m = 50, a geometric series.
  double m51 = 51.0 + L.kappa() + sigma;
  double b = std::exp(-m51 * lx);
  tail += b * (1.0 + b) * (1.0 + b) / (m51 * m51 * m51) / (1.0 - 1.0 / x);
  out.tail_estimate = tail / l2;
  return out;
}

}  // namespace twistarg
