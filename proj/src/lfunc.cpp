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


#include "twistarg/lfunc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "twistarg/errors.hpp"
#include "twistarg/special.hpp"

namespace twistarg {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

cplx root_number(const HeckeForm& form, const DirichletCharacter& chi) {
  if (std::gcd(chi.modulus(), static_cast<std::uint64_t>(form.level())) != 1) {
    throw DomainError("root_number: modulus " + std::to_string(chi.modulus()) + " shares a factor with the level");
  }
  cplx e = gauss_sum(chi);
  return static_cast<double>(form.root_number()) * chi.value(static_cast<std::int64_t>(form.level())) * e * e;
}

LKernel::LKernel(std::shared_ptr<const HeckeForm> form, std::shared_ptr<const CharacterTable> table, AfeOptions options)
    : form_(std::move(form)), table_(std::move(table)), options_(options) {
  const std::uint64_t q = table_->modulus();
  if (std::gcd(q, static_cast<std::uint64_t>(form_->level())) != 1) {
    throw DomainError("modulus " + std::to_string(q) + " is not coprime to the level");
  }
  if (!(options_.target_accuracy > 0.0) || !(options_.height_cap > 0.0) || !(options_.rotation_loss > 0.0) ||
      !(options_.direct_sigma >= 2.0)) {
    throw ValidationError("invalid AFE options");
  }
  Q_ = static_cast<double>(q) * std::sqrt(static_cast<double>(form_->level())) / (2.0 * kPi);
  log_Q_ = std::log(Q_);
  kappa_ = form_->kappa();
  eps_.assign(table_->order(), cplx(0.0, 0.0));
  for (std::uint64_t j = 1; j < table_->order(); ++j) eps_[j] = root_number(*form_, DirichletCharacter(table_, j));

  const std::size_t n_max = form_->n_max();
  ind_.assign(n_max + 1, -1);
  log_n_.assign(n_max + 1, 0.0);
  divisors_.assign(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n % q != 0) ind_[n] = static_cast<std::int32_t>(table_->dlog(n));
    log_n_[n] = std::log(static_cast<double>(n));
    for (std::size_t m = n; m <= n_max; m += n) ++divisors_[m];
  }
}

cplx LKernel::gamma_factor(cplx s) const {
  return std::exp(s * log_Q_ + log_gamma(s + kappa_));
}

double LKernel::rotation(double t) const {
  double excess = kPi * std::abs(t) / 2.0;
  if (excess <= options_.rotation_loss) return 0.0;
  return std::copysign(kPi / 2.0 - options_.rotation_loss / std::abs(t), t);
}

std::size_t LKernel::afe_terms(cplx s) const {
  const double sigma = s.real();
  const double t = s.imag();
  const double phi = rotation(t);
  const double c = std::cos(phi);
  const double a1 = sigma + kappa_;
  const double a2 = 1.0 - sigma + kappa_;
  const double log_target = std::log(options_.target_accuracy) + sigma * log_Q_ + log_gamma(s + kappa_).real();
  const double common = -t * phi;
  const std::size_t n_max = form_->n_max();
  auto log_term = [&](std::size_t n) {
    double ln = n <= n_max ? log_n_[n] : std::log(static_cast<double>(n));
    double ld = n <= n_max ? std::log(static_cast<double>(divisors_[n])) : std::log(2.0) + 0.5 * ln;
    double y = static_cast<double>(n) * c / Q_;
    double l1 = sigma * (log_Q_ - ln) - a1 * std::log(c) + log_upper_gamma_bound(a1, y);
    double l2 = (1.0 - sigma) * (log_Q_ - ln) - a2 * std::log(c) + log_upper_gamma_bound(a2, y);
    double hi = std::max(l1, l2);
    return ld + common + hi + std::log1p(std::exp(std::min(l1, l2) - hi)) - log_target;
  };
  std::vector<double> ratio;
  const double decay_start = (std::max(a1, a2) + 10.0) * Q_ / c;
  for (std::size_t n = 1;; ++n) {
    double r = std::exp(log_term(n));
    ratio.push_back(r);
    if (static_cast<double>(n) > decay_start && r < 1e-6) break;
    if (n > 50 * kMaxCoefficients) throw ResourceError("AFE cutoff search did not terminate");
  }
  double suffix = ratio.back() * 2.0 * Q_ / c;
  std::size_t N = 1;
  for (std::size_t n = ratio.size(); n >= 1; --n) {
    suffix += ratio[n - 1];
    if (suffix > 1.0) {
      N = n;
      break;
    }
  }
  return N;
}

std::size_t LKernel::afe_cutoff(cplx s) const {
  const std::size_t N = afe_terms(s);
  if (N > form_->n_max()) {
    throw ResourceError("AFE needs " + std::to_string(N) + " coefficients at s = " + std::to_string(s.real()) + "+" +
                        std::to_string(s.imag()) + "i; table has " + std::to_string(form_->n_max()));
  }
  return N;
}

std::size_t coefficients_needed(const LKernel& kernel, double sigma_lo, double sigma_hi, double t_lo, double t_hi) {
  std::size_t need = 1;
  const double d = kernel.options().direct_sigma;
  for (double sigma = std::max(sigma_lo, 1.0 - d); sigma <= std::min(sigma_hi, d) + 1e-12; sigma += 0.25) {
    for (double t = t_lo;; t = std::min(t + 1.0, t_hi)) {
      need = std::max(need, kernel.afe_terms(cplx(sigma, t)));
      if (t >= t_hi) break;
    }
  }
  return need;
}

double LKernel::divisor_tail_bound(double sigma, std::size_t N) const {
  if (sigma <= 1.0) throw DomainError("divisor tail bound needs sigma > 1");
  const std::size_t n_max = form_->n_max();
  double head = 0.0;
  std::size_t M = std::max(N, n_max);
  for (std::size_t n = N + 1; n <= n_max; ++n) head += divisors_[n] * std::exp(-sigma * log_n_[n]);
  // sum_{n<=x} d(n) <= x (log x + 1) and partial summation.
  double m = static_cast<double>(std::max<std::size_t>(M, 1));
  double s1 = sigma - 1.0;
  double tail = sigma * std::pow(m, -s1) * ((std::log(m) + 1.0) / s1 + 1.0 / (s1 * s1));
  return head + tail;
}

std::vector<cplx> LKernel::series_buckets(cplx s, std::size_t N) const {
  if (N > form_->n_max()) throw ResourceError("series cutoff beyond coefficient table");
  std::vector<cplx> buckets(table_->order(), cplx(0.0, 0.0));
  const auto lambdas = form_->lambdas();
  for (std::size_t n = 1; n <= N; ++n) {
    if (ind_[n] < 0 || lambdas[n] == 0.0) continue;
    buckets[static_cast<std::size_t>(ind_[n])] += lambdas[n] * std::exp(-s * log_n_[n]);
  }
  return buckets;
}

std::vector<cplx> LKernel::combine(const std::vector<cplx>& first, const std::vector<cplx>* second,
                                   std::span<const std::uint64_t> js) const {
  const std::uint64_t order = table_->order();
  const auto& roots = table_->roots();
  std::vector<cplx> out;
  out.reserve(js.size());
  for (std::uint64_t j : js) {
    cplx a(0.0, 0.0);
    cplx b(0.0, 0.0);
    std::uint64_t idx = 0;
    for (std::uint64_t k = 0; k < order; ++k) {
      const cplx& r = roots[idx];
      a += r * first[k];
      if (second != nullptr) b += std::conj(r) * (*second)[k];
      idx += j;
      if (idx >= order) idx -= order;
    }
    out.push_back(second != nullptr ? a + eps_[j] * b : a);
  }
  return out;
}

std::vector<cplx> LKernel::evaluate_afe(cplx s, std::span<const std::uint64_t> js) const {
  const std::size_t N = afe_cutoff(s);
  const double phi = rotation(s.imag());
  const cplx unit = std::polar(1.0 / Q_, phi);
  const cplx w1 = s + kappa_;
  const cplx w2 = 1.0 - s + kappa_;
  std::vector<cplx> b1(table_->order(), cplx(0.0, 0.0));
  std::vector<cplx> b2(table_->order(), cplx(0.0, 0.0));
  const auto lambdas = form_->lambdas();
  for (std::size_t n = 1; n <= N; ++n) {
    if (ind_[n] < 0 || lambdas[n] == 0.0) continue;
    const double lq = log_Q_ - log_n_[n];
    const cplx z = static_cast<double>(n) * unit;
    const auto k = static_cast<std::size_t>(ind_[n]);
    b1[k] += lambdas[n] * std::exp(s * lq) * upper_gamma(w1, z);
    b2[k] += lambdas[n] * std::exp((1.0 - s) * lq) * upper_gamma(w2, std::conj(z));
  }
  return combine(b1, &b2, js);
}

std::vector<cplx> LKernel::evaluate_direct(cplx s, std::span<const std::uint64_t> js) const {
  const double sigma = s.real();
  std::size_t lo = 1;
  std::size_t hi = form_->n_max();
  auto analytic = [&](std::size_t N) {
    double m = static_cast<double>(N);
    double s1 = sigma - 1.0;
    return sigma * std::pow(m, -s1) * ((std::log(m) + 1.0) / s1 + 1.0 / (s1 * s1));
  };
  if (analytic(hi) > options_.target_accuracy) throw ResourceError("Dirichlet series cutoff beyond coefficient table");
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (analytic(mid) <= options_.target_accuracy) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return combine(series_buckets(s, lo), nullptr, js);
}

std::vector<cplx> LKernel::evaluate(cplx s, std::span<const std::uint64_t> js, Output kind) const {
  if (std::abs(s.imag()) > options_.height_cap) {
    throw DomainError("|Im s| = " + std::to_string(std::abs(s.imag())) + " exceeds the height cap");
  }
  for (std::uint64_t j : js) {
    if (j == 0 || j >= table_->order()) throw DomainError("character index must be primitive");
  }
  std::vector<cplx> out;
  if (s.real() >= options_.direct_sigma) {
    out = evaluate_direct(s, js);
    if (kind == Output::L) return out;
    cplx g = gamma_factor(s);
    for (auto& v : out) v *= g;
    return out;
  }
  if (s.real() <= 1.0 - options_.direct_sigma) {
    out = evaluate(1.0 - std::conj(s), js, Output::Completed);
    for (std::size_t i = 0; i < js.size(); ++i) out[i] = eps_[js[i]] * std::conj(out[i]);
  } else {
    out = evaluate_afe(s, js);
  }
  if (kind == Output::L) {
    cplx g = gamma_factor(s);
    for (auto& v : out) v /= g;
  }
  return out;
}

TwistedL::TwistedL(std::shared_ptr<const LKernel> kernel, std::uint64_t j) : kernel_(std::move(kernel)), j_(j) {
  if (!kernel_) throw ValidationError("TwistedL without kernel");
  if (j_ == 0 || j_ >= kernel_->table().order()) throw DomainError("TwistedL needs a primitive character");
}

TwistedL TwistedL::make(std::shared_ptr<const HeckeForm> form, std::uint64_t q, std::uint64_t j, AfeOptions options) {
  auto kernel = std::make_shared<const LKernel>(std::move(form), CharacterTable::build(q), options);
  return {kernel, j};
}

SeriesValue dirichlet_series_value(const TwistedL& L, cplx s, std::size_t N) {
  if (s.real() < 1.5) throw DomainError("dirichlet_series_value needs Re s >= 1.5");
  const auto& k = L.kernel();
  if (N > k.form().n_max()) throw ResourceError("series cutoff beyond coefficient table");
  auto chi = L.chi();
  cplx sum(0.0, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    double lam = k.form().lambda(n);
    if (lam == 0.0) continue;
    sum += lam * chi.value(static_cast<std::int64_t>(n)) * std::pow(static_cast<double>(n), -s);
  }
  return {sum, k.divisor_tail_bound(s.real(), N)};
}

cplx smoothed_dirichlet_series(const TwistedL& L, cplx s, std::size_t N0) {
  const auto& form = L.kernel().form();
  if (N0 == 0 || 2 * N0 > form.n_max() + 1) throw ResourceError("smoothed series needs 2 N0 coefficients");
  auto chi = L.chi();
  auto weight = [&](std::size_t n) {
    if (n <= N0) return 1.0;
    double u = static_cast<double>(n - N0) / static_cast<double>(N0);
    if (u >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - u));
    double b = std::exp(-1.0 / u);
    return a / (a + b);
  };
  cplx sum(0.0, 0.0);
  for (std::size_t n = 1; n < 2 * N0; ++n) {
    double lam = form.lambda(n);
    if (lam == 0.0 || n % chi.modulus() == 0) continue;
    sum += weight(n) * lam * chi.value(static_cast<std::int64_t>(n)) * std::exp(-s * std::log(static_cast<double>(n)));
  }
  return sum;
}

cplx completed_lambda(const TwistedL& L, cplx s) {
  std::uint64_t j = L.index();
  return L.kernel().evaluate(s, std::span<const std::uint64_t>(&j, 1), Output::Completed)[0];
}

cplx l_value(const TwistedL& L, cplx s) {
  std::uint64_t j = L.index();
  return L.kernel().evaluate(s, std::span<const std::uint64_t>(&j, 1), Output::L)[0];
}

cplx log_derivative(const TwistedL& L, cplx s, double h) {
  if (h == 0.0) h = 0.05;
  if (!(h > 0.0)) throw ValidationError("log_derivative step must be positive");
  const auto& k = L.kernel();
  cplx center = completed_lambda(L, s);
  if (std::abs(center) < 1e-8 * std::abs(k.gamma_factor(s))) {
    throw DomainError("log_derivative: s is too close to a zero");
  }
  // (1 / 4h) sum_k w_k^{-1} Lambda(s + h w_k), w_k = i^k, has error O(h^4); one
  // Richardson step removes it.
  auto stencil = [&](double r) {
    const cplx i(0.0, 1.0);
    cplx acc = completed_lambda(L, s + r) - completed_lambda(L, s - r) - i * completed_lambda(L, s + i * r) +
               i * completed_lambda(L, s - i * r);
    return acc / (4.0 * r);
  };
  cplx d = (16.0 * stencil(h / 2.0) - stencil(h)) / 15.0;
  return d / center - std::log(k.Q()) - digamma(s + k.kappa());
}

cplx log_derivative_series(const TwistedL& L, cplx s, std::size_t N) {
  const auto& form = L.kernel().form();
  if (N > form.n_max()) throw ResourceError("series cutoff beyond coefficient table");
  auto chi = L.chi();
  cplx sum(0.0, 0.0);
  for (std::size_t n = 2; n <= N; ++n) {
    auto pp = form.sieve().prime_power(n);
    if (!pp) continue;
    sum += std::log(static_cast<double>(pp->p)) * cf_coefficient(form, n) * chi.value(static_cast<std::int64_t>(n)) *
           std::pow(static_cast<double>(n), -s);
  }
  return -sum;
}

}  // namespace twistarg
