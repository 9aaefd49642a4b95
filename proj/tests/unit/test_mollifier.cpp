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


#include <cmath>
#include <random>

#include "doctest.h"
#include "twistarg/errors.hpp"
#include "twistarg/mollifier.hpp"
#include "twistarg/zeros.hpp"

using namespace twistarg;

namespace {

std::shared_ptr<const HeckeForm> small_delta() {
  static auto form = std::make_shared<const HeckeForm>(HeckeForm::delta(30000));
  return form;
}

}  // namespace

TEST_CASE("taper") {
  CHECK(taper(0.25) == 0.5);
  CHECK(taper(0.5) == 1.0);
  CHECK(taper(1.0) == 1.0);
  CHECK(taper(0.0) == 0.0);
  CHECK_THROWS_AS(taper(1.5), DomainError);
  CHECK_THROWS_AS(taper(-0.1), DomainError);
}

TEST_CASE("mollifier coefficients and values") {
  auto form = small_delta();
  auto table = CharacterTable::build(101);
  DirichletCharacter chi(table, 17);

  auto tiny = MollifierSpec::build(*form, 101, 0.002);
  CHECK(tiny.length < 2.0);
  CHECK_FALSE(tiny.overridden);
  CHECK(m_value(tiny, chi, {0.5, 3.0}) == cplx(1.0, 0.0));

  auto spec = MollifierSpec::build(*form, 101, 0.002, 50.0);
  CHECK(spec.overridden);
  REQUIRE(spec.support() == 50);
  CHECK(spec.coeffs[1] == 1.0);
  CHECK(spec.coeffs[8] == 0.0);
  CHECK(spec.coeffs[4] == doctest::Approx(mu_f(*form, 4) * taper(std::log(50.0 / 4.0) / std::log(50.0))));
  for (std::uint64_t l = 1; l <= 50; ++l) CHECK(std::abs(spec.coeffs[l]) <= std::abs(mu_f(*form, l)) + 1e-15);

  const cplx s(0.5, 0.0);
  cplx brute(0.0, 0.0);
  for (std::uint64_t l = 1; l <= 50; ++l) {
    double mu = mu_f(*form, l);
    double arg = std::log(50.0 / static_cast<double>(l)) / std::log(50.0);
    double p = arg <= 0.5 ? 2.0 * arg : 1.0;
    brute += mu * p * chi.value(static_cast<std::int64_t>(l)) * std::pow(static_cast<double>(l), -s);
  }
  CHECK(std::abs(m_value(spec, chi, s) - brute) < 1e-12);

  // Coefficients of L M vanish on 2..sqrt(L) and agree with the product of the two series.
  auto c = lm_coefficients(spec, *form, 2000);
  CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-15));
  for (int n = 2; n <= 7; ++n) CHECK(std::abs(c[n]) < 1e-14);
  CHECK(std::abs(c[11]) > 1e-3);
  const cplx w(3.0, 1.0);
  cplx series(0.0, 0.0);
  for (std::size_t n = 1; n <= 2000; ++n) {
    series += c[n] * chi.value(static_cast<std::int64_t>(n)) * std::pow(static_cast<double>(n), -w);
  }
  auto L = TwistedL::make(form, 101, 17);
  CHECK(std::abs(series - l_value(L, w) * m_value(spec, chi, w)) < 1e-8);

  const cplx z(0.7, 2.3);
  CHECK(std::abs(m_value(spec, chi.conj(), std::conj(z)) - std::conj(m_value(spec, chi, z))) < 1e-12);
  std::vector<std::uint64_t> js{1, 17, 50};
  auto fam = m_values(spec, *table, js, z);
  for (std::size_t i = 0; i < js.size(); ++i) {
    CHECK(std::abs(fam[i] - m_value(spec, DirichletCharacter(table, js[i]), z)) < 1e-12);
  }
}

TEST_CASE("L M deviation") {
  auto form = small_delta();
  auto kernel = std::make_shared<const LKernel>(form, CharacterTable::build(101));
  auto spec = MollifierSpec::build(*form, 101, 0.002, 50.0);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 99);
  std::uniform_real_distribution<double> height(-5.0, 5.0);
  for (int k = 0; k < 10; ++k) {
    TwistedL L(kernel, pick(rng));
    for (double sigma : {2.0, 3.0}) {
      cplx s(sigma, height(rng));
      double dev = std::abs(l_value(L, s) * m_value(spec, L.chi(), s) - 1.0);
      CHECK(dev <= lm_deviation_majorant(spec, *form, sigma));
    }
  }
  auto far = lm_deviation_average(spec, kernel, 2.0, 0.0);
  CHECK(far.count == 99);
  CHECK(far.average < 1e-3);
  auto mid = lm_deviation_average(spec, kernel, 0.6, 0.0);
  auto plain = lm_deviation_average(MollifierSpec::build(*form, 101, 0.002), kernel, 0.6, 0.0);
  CHECK(mid.average < plain.average);
  CHECK_THROWS_AS(lm_deviation_average(spec, kernel, 0.2, 0.0), DomainError);
}

TEST_CASE("weighted zero identity for the mollified test function") {
  auto form = small_delta();
  auto L = TwistedL::make(form, 101, 3);
  auto spec = MollifierSpec::build(*form, 101, 0.002, 50.0);
  auto dev = mollified_deviation(L, spec);
  const double sp = 0.3;
  auto zs = omega_zeros(dev, sp, 3.0, 1.6, 2.6);
  CHECK(zs.size() >= 2);
  SelbergOptions opts;
  opts.quad_tol = 1e-9;
  opts.max_depth = 6;
  auto r = selberg_identity_check(dev, zs, sp, 1.6, 2.6, opts);
  CHECK(r.residual <= 1e-4);
  CHECK(r.lhs > 0.0);
}
