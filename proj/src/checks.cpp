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

#include "twistarg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "twistarg/moments.hpp"

namespace twistarg {

double character_orthogonality_error(const std::shared_ptr<const CharacterTable>& table) {
  const std::uint64_t q = table->modulus();
  const std::uint64_t n = q - 1;
  std::vector<std::vector<cplx>> v(n, std::vector<cplx>(n));
  for (std::uint64_t j = 0; j < n; ++j) {
    DirichletCharacter chi(table, j);
    for (std::uint64_t a = 1; a < q; ++a) v[j][a - 1] = chi.value(static_cast<std::int64_t>(a));
  }
  double worst = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = i; j < n; ++j) {
      cplx acc(0.0, 0.0);
      for (std::uint64_t a = 0; a < n; ++a) acc += v[i][a] * std::conj(v[j][a]);
      worst = std::max(worst, std::abs(acc - (i == j ? static_cast<double>(n) : 0.0)));
    }
  }
  return worst;
}

double gauss_unit_error(const std::shared_ptr<const CharacterTable>& table) {
  double worst = 0.0;
  for (const auto& chi : enumerate_primitive(table)) worst = std::max(worst, std::abs(std::abs(gauss_sum(chi)) - 1.0));
  return worst;
}

double fe_residual(const TwistedL& L, cplx s) {
  const cplx lhs = completed_lambda(L, s);
  const cplx rhs = L.eps() * completed_lambda(L.conj(), 1.0 - s);
  const double scale = std::max(std::abs(L.kernel().gamma_factor(s)), std::abs(L.kernel().gamma_factor(1.0 - s)));
  return std::abs(lhs - rhs) / scale;
}

double hardy_imag_relative(const TwistedL& L, double t) {
  auto h = hardy_z_value(L, t);
  return std::abs(h.imag) / (h.scale + 1e-4);
}

ExponentialConfig random_exponential_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ExponentialConfig c;
  const double H = 1.0 + 3.0 * u(rng);
  c.t1 = -3.0 + 6.0 * u(rng);
  c.t2 = c.t1 + H;
  c.b = std::exp(std::numbers::pi / H + 0.5 + 2.5 * u(rng));
  c.a = std::exp(-3.0 + 6.0 * u(rng));
  c.sigma_prime = std::log(c.a) / std::log(c.b) - 2.0 + 2.5 * u(rng);
  return c;
}

SelbergCheck run_exponential_config(const ExponentialConfig& c) {
  auto z = exponential_omega_zeros(c.a, c.b, c.t1, c.t2);
  return selberg_identity_check(exponential_deviation(c.a, c.b), z, c.sigma_prime, c.t1, c.t2);
}

std::vector<CheckResult> check_suite(const std::shared_ptr<const LKernel>& kernel, std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto add = [&out](std::string name, double value, double threshold, std::string detail = {}) {
    out.push_back({std::move(name), value, threshold, value <= threshold, std::move(detail)});
  };
  const auto table = kernel->table_ptr();
  const std::uint64_t q = table->modulus();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, q - 2);

  add("character orthogonality", character_orthogonality_error(table), 1e-9);
  add("unit Gauss sums", gauss_unit_error(table), 1e-10);

  std::uniform_real_distribution<double> sig(-0.5, 1.5), ht(-20.0, 20.0);
  double fe = 0.0;
  for (int i = 0; i < 10; ++i) fe = std::max(fe, fe_residual(TwistedL(kernel, pick(rng)), cplx(sig(rng), ht(rng))));
  add("functional equation", fe, 1e-8, "10 strip points");

  std::uniform_real_distribution<double> right(2.5, 3.0);
  const std::size_t N = kernel->form().n_max();
  double series = 0.0;
  for (int i = 0; i < 5; ++i) {
    TwistedL L(kernel, pick(rng));
    const cplx s(right(rng), ht(rng));
    auto d = dirichlet_series_value(L, s, N);
    series = std::max(series, std::abs(l_value(L, s) - d.value) - d.tail_bound);
  }
  add("expansion vs Dirichlet series", std::max(series, 0.0), 1e-10, fmt::format("5 points, excess over tail bound, N = {}", N));

  double hz = 0.0;
  for (int i = 0; i < 20; ++i) hz = std::max(hz, hardy_imag_relative(TwistedL(kernel, pick(rng)), ht(rng)));
  add("realness on the critical line", hz, 1e-8, "20 points");

  double sel = 0.0;
  for (int i = 0; i < 3; ++i) sel = std::max(sel, run_exponential_config(random_exponential_config(rng)).residual);
  add("weighted zero identity", sel, 1e-6, "3 closed-form configurations");

  if (q - 1 <= 10'000) {
    double diff = 0.0;
    for (int n : {1, 2}) {
      auto o = diagonal_oracle(*kernel, 20, 1.0, n);
      diff = std::max(diff, std::abs(o.difference));
      if (n == 1 && !std::isnan(o.closed_form)) {
        add("diagonal closed form", std::abs(o.closed_form - o.orthogonal), 1e-12, "x^3 = 20, n = 1");
      }
    }
    add("orthogonality oracle", diff, 1e-9, "x^3 = 20, n = 1, 2");
  }

  auto asm2 = assemble_m2(*kernel, 20, 1.0);
  auto sweep = sweep_s(*kernel, 1.0, 20);
  double m2 = 0.0;
  for (const auto& s : sweep.samples) m2 += s.M * s.M;
  m2 /= static_cast<double>(sweep.samples.size());
  add("assembled second moment of M", std::abs(m2 - asm2.average), 1e-9, "x^3 = 20");
  return out;
}

}  // namespace twistarg
