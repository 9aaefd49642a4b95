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

#include "twistarg/moments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "twistarg/arith.hpp"
#include "twistarg/errors.hpp"
#include "twistarg/parallel.hpp"

namespace twistarg {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::uint64_t> primitive_indices(std::uint64_t q) {
  std::vector<std::uint64_t> js;
  js.reserve(q - 2);
  for (std::uint64_t j = 1; j + 1 < q; ++j) js.push_back(j);
  return js;
}

std::vector<std::uint64_t> small_primes_below(double y) {
  const auto top = static_cast<std::uint64_t>(std::ceil(y));
  std::vector<bool> composite(top + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p < top + 1; ++p) {
    if (composite[p]) continue;
    if (static_cast<double>(p) < y) out.push_back(p);
    for (std::uint64_t m = p * p; m <= top; m += p) composite[m] = true;
  }
  return out;
}

}  // namespace

double moment_constant(int n) {
  if (n < 0) throw DomainError("moment_constant: n must be non-negative");
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= (2.0 * k - 1.0) / (2.0 * kPi * kPi);
  return c;
}

PrimeSumStats prime_sum_stats(const HeckeForm& form, double x) {
  if (!(x >= 2.0)) throw DomainError("prime_sum_stats: x must be at least 2");
  const auto top = static_cast<std::uint64_t>(std::floor(x));
  if (top > form.n_max()) throw ResourceError(fmt::format("prime_sum_stats: x = {} exceeds the coefficient table", x));
  PrimeSumStats st;
  st.x = x;
  for (auto p : form.sieve().primes_up_to(top)) {
    const double pd = static_cast<double>(p);
    const double lp = std::log(pd);
    const double lam = form.lambda(p);
    st.inv_p += 1.0 / pd;
    st.log_p += lp / pd;
    st.log2_p += lp * lp / pd;
    st.lambda2_p += lam * lam / pd;
    ++st.primes;
  }
  st.log_x = std::log(x);
  st.loglog_x = std::log(st.log_x);
  st.log2_x = st.log_x * st.log_x;
  return st;
}

std::vector<cplx> prime_weights(const HeckeForm& form, std::uint64_t x3, double t, std::vector<std::uint64_t>* primes) {
  if (x3 > form.n_max()) throw ResourceError(fmt::format("x^3 = {} exceeds the coefficient table", x3));
  auto ps = form.sieve().primes_up_to(x3);
  std::vector<cplx> ws;
  ws.reserve(ps.size());
  for (auto p : ps) ws.push_back(form.lambda(p) * std::exp(-cplx(0.5, t) * std::log(static_cast<double>(p))));
  if (primes) *primes = std::move(ps);
  return ws;
}

DiagonalOracle diagonal_oracle(const LKernel& kernel, std::uint64_t x3, double t, int n) {
  if (n < 1) throw DomainError("diagonal_oracle: n must be at least 1");
  const auto& table = kernel.table();
  const std::uint64_t q = table.modulus();
  if (q - 1 > 10'000) throw ResourceError(fmt::format("diagonal_oracle: {} characters exceed the direct sweep limit", q - 1));
  std::vector<std::uint64_t> primes;
  auto ws = prime_weights(kernel.form(), x3, t, &primes);
  std::vector<std::uint64_t> ps;
  std::vector<cplx> w;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] % q == 0) continue;
    ps.push_back(primes[i]);
    w.push_back(ws[i]);
  }
  if (std::pow(static_cast<double>(ps.size()), 2.0 * n) > 1e8) {
    throw ResourceError(fmt::format("diagonal_oracle: {}^{} tuples exceed the enumeration guard", ps.size(), 2 * n));
  }

  DiagonalOracle out;
  out.q = q;
  out.x3 = x3;
  out.t = t;
  out.n = n;

  // Character by character.
  for (std::uint64_t j = 0; j < q - 1; ++j) {
    DirichletCharacter chi(kernel.table_ptr(), j);
    cplx P(0.0, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) P += w[i] * chi.value(static_cast<std::int64_t>(ps[i]));
    const double a = ipow(std::abs(P), 2 * n);
    out.direct += a;
    if (j == 0) out.principal = a;
  }
  out.primitive = out.direct - out.principal;

  // Ordered n-tuples bucketed by product residue; congruent pairs of them are the surviving 2n-tuples.
  std::vector<std::vector<cplx>> buckets(q);
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  if (!ps.empty()) {
    for (;;) {
      std::uint64_t r = 1;
      cplx W(1.0, 0.0);
      for (auto d : digit) {
        r = r * (ps[d] % q) % q;
        W *= w[d];
      }
      buckets[r].push_back(W);
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == ps.size()) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  }
  cplx acc(0.0, 0.0);
  for (const auto& b : buckets) {
    for (const auto& u : b) {
      for (const auto& v : b) acc += u * std::conj(v);
    }
    out.tuples += b.size() * b.size();
  }
  out.orthogonal = static_cast<double>(q - 1) * acc.real();
  out.difference = out.direct - out.orthogonal;

  out.closed_form = std::numeric_limits<double>::quiet_NaN();
  if (n == 1 && x3 < q) {
    double s = 0.0;
    for (auto p : ps) {
      const double lam = kernel.form().lambda(p);
      s += lam * lam / static_cast<double>(p);
    }
    out.closed_form = static_cast<double>(q - 1) * s;
  }
  return out;
}

SecondMomentAssembly assemble_m2(const LKernel& kernel, std::uint64_t x3, double t) {
  const std::uint64_t q = kernel.table().modulus();
  std::vector<std::uint64_t> primes;
  auto ws = prime_weights(kernel.form(), x3, t, &primes);
  std::vector<cplx> W(q, cplx(0.0, 0.0));
  cplx P0(0.0, 0.0);
  double lam2 = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double lam = kernel.form().lambda(primes[i]);
    lam2 += lam * lam / static_cast<double>(primes[i]);
    if (primes[i] % q == 0) continue;
    W[primes[i] % q] += ws[i];
    P0 += ws[i];
  }
  SecondMomentAssembly out;
  const double qm1 = static_cast<double>(q - 1);
  double d = 0.0;
  cplx o(0.0, 0.0);
  for (std::uint64_t r = 1; r < q; ++r) {
    d += std::norm(W[r]);
    o += W[r] * W[powmod(r, q - 2, q)];
  }
  out.diagonal = qm1 * d;
  out.off_diagonal = qm1 * o.real();
  const double m0 = P0.imag() / kPi;
  out.principal = m0 * m0;
  out.average = ((out.diagonal - out.off_diagonal) / (2.0 * kPi * kPi) - out.principal) / static_cast<double>(q - 2);
  out.prediction = lam2 / (2.0 * kPi * kPi);
  return out;
}

SSweep sweep_s(const LKernel& kernel, double t, std::uint64_t x3, const SweepOptions& options) {
  const std::uint64_t q = kernel.table().modulus();
  auto js = primitive_indices(q);
  // Characters sharing a path share its adaptive refinement, so the split must not follow the worker count.
  const std::size_t per = std::max<std::size_t>(1, options.chunk);
  const std::size_t chunks = (js.size() + per - 1) / per;
  auto parts = parallel_map(chunks, options.workers, [&](std::size_t c) {
    const std::size_t lo = std::min(js.size(), c * per);
    const std::size_t hi = std::min(js.size(), lo + per);
    if (lo == hi) return SArgFamily{};
    return s_arg_family(kernel, std::span<const std::uint64_t>(js).subspan(lo, hi - lo), t, options.sarg);
  });

  SSweep out;
  out.samples.resize(js.size());
  std::vector<std::size_t> pending;
  std::size_t pos = 0;
  for (const auto& part : parts) {
    out.evaluations += part.evaluations;
    for (std::size_t i = 0; i < part.S.size(); ++i, ++pos) {
      out.samples[pos] = {js[pos], t, part.S[i], 0.0, 0.0, false};
      if (part.failed[i]) pending.push_back(pos);
    }
  }

  for (int k = 1; k <= options.max_nudges && !pending.empty(); ++k) {
    const double tk = t + (k % 2 == 1 ? 1.0 : -1.0) * options.nudge * ((k + 1) / 2);
    std::vector<std::uint64_t> sub;
    for (auto i : pending) sub.push_back(js[i]);
    auto r = s_arg_family(kernel, sub, tk, options.sarg);
    out.evaluations += r.evaluations;
    std::vector<std::size_t> still;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (r.failed[i]) {
        still.push_back(pending[i]);
      } else {
        out.samples[pending[i]] = {js[pending[i]], tk, r.S[i], 0.0, 0.0, true};
        ++out.nudged;
      }
    }
    pending = std::move(still);
  }
  if (!pending.empty()) {
    std::vector<std::uint64_t> bad;
    for (auto i : pending) bad.push_back(js[i]);
    throw NumericError(fmt::format("S(t) unresolved at q = {}, t = {} after {} nudges for characters {}", q, t,
                                   options.max_nudges, bad));
  }

  if (x3 > 0) {
    const double x = std::cbrt(static_cast<double>(x3));
    auto M = m_sum_family(kernel, js, t, x);
    for (std::size_t i = 0; i < js.size(); ++i) {
      auto& s = out.samples[i];
      s.M = s.nudged ? m_sum_family(kernel, std::span<const std::uint64_t>(&js[i], 1), s.t, x)[0] : M[i];
      s.R = s.S - s.M;
    }
  }
  return out;
}

std::uint64_t default_x_cubed(std::uint64_t q) {
  return std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::floor(std::sqrt(static_cast<double>(q)))));
}

MomentReport sweep_moments(const LKernel& kernel, double t, std::uint64_t x3, std::vector<int> n_list,
                           const SweepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!(t > 0.0)) throw DomainError("sweep_moments: t must be positive");
  if (n_list.empty()) throw DomainError("sweep_moments: empty moment list");
  for (int n : n_list) {
    if (n < 1) throw DomainError(fmt::format("sweep_moments: moment order {} must be at least 1", n));
  }
  if (x3 < 2) throw DomainError("sweep_moments: x^3 must be at least 2");
  const std::uint64_t q = kernel.table().modulus();

  MomentReport rep;
  rep.q = q;
  rep.t = t;
  rep.x3 = x3;
  rep.n_list = n_list;
  rep.loglog_q = std::log(std::log(static_cast<double>(q)));
  rep.prime_sum = prime_sum_stats(kernel.form(), static_cast<double>(x3)).lambda2_p;

  auto sweep = sweep_s(kernel, t, x3, options);
  rep.samples = std::move(sweep.samples);
  rep.nudged = sweep.nudged;
  rep.characters = rep.samples.size();
  if (rep.characters != q - 2) {
    throw NumericError(fmt::format("sweep_moments: {} characters averaged, expected {}", rep.characters, q - 2));
  }
  const double count = static_cast<double>(rep.characters);

  for (int n : n_list) {
    MomentRow row;
    row.n = n;
    for (const auto& s : rep.samples) {
      row.s_moment += ipow(s.S, 2 * n);
      row.m_moment += ipow(s.M, 2 * n);
      row.r_moment += ipow(std::abs(s.R), 2 * n);
      row.m_odd += ipow(s.M, 2 * n - 1);
      row.s_odd += ipow(s.S, 2 * n - 1);
    }
    row.s_moment /= count;
    row.m_moment /= count;
    row.r_moment /= count;
    row.m_odd /= count;
    row.s_odd /= count;
    row.constant = moment_constant(n);
    row.prediction_loglog = row.constant * ipow(rep.loglog_q, n);
    row.prediction_prime_sum = row.constant * ipow(rep.prime_sum, n);
    row.holder_lhs = std::abs(row.s_moment - row.m_moment);
    const double e = 2.0 * n;
    for (int l = 1; l <= 2 * n; ++l) {
      row.holder_rhs += binomial(2 * n, l) * std::pow(row.m_moment, 1.0 - l / e) * std::pow(row.r_moment, l / e);
    }
    row.holder_ok = row.holder_lhs <= row.holder_rhs * (1.0 + 1e-12);
    rep.rows.push_back(row);
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

double clt_cdf(double xi) { return 0.5 * std::erfc(-kPi * xi); }

CltResult clt_from_values(std::span<const double> values, double scale, int bins) {
  if (bins < 1) throw DomainError("clt: need at least one bin");
  if (values.empty()) throw DomainError("clt: no values");
  if (!(scale > 0.0)) throw DomainError("clt: scale must be positive");
  std::vector<double> xi;
  xi.reserve(values.size());
  double top = 0.0;
  for (double v : values) {
    xi.push_back(v / scale);
    top = std::max(top, std::abs(xi.back()));
  }
  const double sd = 1.0 / (kPi * std::sqrt(2.0));
  const double half = std::max(4.0 * sd, top * (1.0 + 1e-12));
  const double width = 2.0 * half / bins;
  CltResult out;
  out.scale = scale;
  out.characters = values.size();
  out.histogram.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    auto& h = out.histogram[static_cast<std::size_t>(b)];
    h.left = -half + b * width;
    h.right = b + 1 == bins ? half : -half + (b + 1) * width;
    h.gaussian_mass = clt_cdf(h.right) - clt_cdf(h.left);
  }
  const double unit = 1.0 / static_cast<double>(xi.size());
  for (double v : xi) {
    auto b = static_cast<int>(std::floor((v + half) / width));
    out.histogram[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))].mass += unit;
  }
  std::sort(xi.begin(), xi.end());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double F = clt_cdf(xi[i]);
    out.ks_distance = std::max({out.ks_distance, (i + 1) * unit - F, F - i * unit});
  }
  return out;
}

CltResult clt_distribution(const LKernel& kernel, double t, int bins, const SweepOptions& options) {
  if (!(t > 0.0)) throw DomainError("clt_distribution: t must be positive");
  const std::uint64_t q = kernel.table().modulus();
  auto sweep = sweep_s(kernel, t, 0, options);
  std::vector<double> S;
  S.reserve(sweep.samples.size());
  for (const auto& s : sweep.samples) S.push_back(s.S);
  auto out = clt_from_values(S, std::sqrt(std::log(std::log(static_cast<double>(q)))), bins);
  out.q = q;
  out.t = t;
  out.nudged = sweep.nudged;
  return out;
}

LargeSieveRatio large_sieve_ratio(const CharacterTable& table, double y, int n) {
  const std::uint64_t q = table.modulus();
  if (n < 1) throw DomainError("large_sieve_ratio: n must be at least 1");
  if (!(y > 1.0) || y > std::pow(static_cast<double>(q), 1.0 / n) * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("large_sieve_ratio: y = {} is outside (1, q^(1/{})]", y, n));
  }
  auto primes = small_primes_below(y);
  std::vector<std::uint64_t> ps, sq;
  std::vector<cplx> w1, w2;
  const double log_y = std::log(y);
  for (auto p : primes) {
    if (p % q == 0) continue;
    const double pd = static_cast<double>(p);
    ps.push_back(p);
    w1.emplace_back(std::log(pd) / log_y / std::sqrt(pd), 0.0);
    sq.push_back(p * p);
    w2.emplace_back(1.0 / pd, 0.0);
  }
  auto js = primitive_indices(q);
  auto a = twisted_sums(table, ps, w1, js);
  auto b = twisted_sums(table, sq, w2, js);
  LargeSieveRatio out;
  out.q = q;
  out.y = y;
  out.n = n;
  for (std::size_t i = 0; i < js.size(); ++i) {
    out.weighted += ipow(std::abs(a[i]), 2 * n);
    out.squares += ipow(std::abs(b[i]), 2 * n);
  }
  out.weighted /= static_cast<double>(q);
  out.squares /= static_cast<double>(q);
  return out;
}

}  // namespace twistarg
