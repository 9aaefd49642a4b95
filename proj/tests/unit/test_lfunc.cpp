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
#include "twistarg/lfunc.hpp"
#include "twistarg/special.hpp"

using namespace twistarg;

namespace {

std::shared_ptr<const HeckeForm> delta_form() {
  static auto form = std::make_shared<const HeckeForm>(HeckeForm::delta(200000));
  return form;
}

// Size of the larger of the two gamma factors in the functional equation.
double scale(const TwistedL& L, cplx s) {
  return std::max(std::abs(L.kernel().gamma_factor(s)), std::abs(L.kernel().gamma_factor(1.0 - s)));
}

}  // namespace

TEST_CASE("root numbers") {
  auto form = delta_form();
  auto t5 = CharacterTable::build(5);
  DirichletCharacter quad(t5, 2);
  CHECK(std::abs(root_number(*form, quad) - cplx(1.0, 0.0)) < 1e-12);
  auto t101 = CharacterTable::build(101);
  for (const auto& chi : enumerate_primitive(t101)) {
    cplx e = root_number(*form, chi);
    cplx g = gauss_sum(chi);
    CHECK(std::abs(std::abs(e) - 1.0) < 1e-10);
    CHECK(std::abs(e - g * g) < 1e-12);
  }
  auto f11 = parse_form(R"({"weight": 2, "level": 11, "nebentypus": "trivial", "normalization": "arithmetic",
                            "root_number": 1, "ap": [[2, -2], [3, -1], [5, 1], [7, -2], [11, 1]]})",
                        {"x11", "", ""}, 11);
  CHECK_THROWS_AS(root_number(f11, DirichletCharacter(CharacterTable::build(11), 1)), DomainError);
}

TEST_CASE("Dirichlet series oracle") {
  auto L = TwistedL::make(delta_form(), 101, 3);
  CHECK(dirichlet_series_value(L, 3.0, 1).value == cplx(1.0, 0.0));
  CHECK_THROWS_AS(dirichlet_series_value(L, cplx(1.4, 0.0), 10), DomainError);
  auto v = dirichlet_series_value(L, cplx(3.0, 0.0), 200000);
  CHECK(std::abs(v.value - 1.0) <= 0.444940798433634233913685 + v.tail_bound);
  // sum_{n>=2} d(n) / n^3 = zeta(3)^2 - 1: the bound at N = 1 must dominate it.
  CHECK(L.kernel().divisor_tail_bound(3.0, 1) >= 0.444940798433634233913685);
  cplx afe = l_value(L, cplx(3.0, 0.0));
  CHECK(std::abs(afe - v.value) <= v.tail_bound + 1e-12);
}

TEST_CASE("AFE against Dirichlet series") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> sig(2.0, 3.0);
  std::uniform_real_distribution<double> ht(-10.0, 10.0);
  for (std::uint64_t q : {101ULL, 211ULL}) {
    auto kernel = std::make_shared<const LKernel>(delta_form(), CharacterTable::build(q));
    std::uniform_int_distribution<std::uint64_t> js(1, q - 2);
    for (int i = 0; i < 5; ++i) {
      TwistedL L(kernel, js(rng));
      cplx s(sig(rng), ht(rng));
      cplx smooth = smoothed_dirichlet_series(L, s, 100000);
      CHECK(std::abs(l_value(L, s) - smooth) <= 1e-9);
    }
  }
  auto L = TwistedL::make(delta_form(), 101, 1);
  cplx s(2.0, 0.3);
  CHECK(std::abs(completed_lambda(L, s) / L.kernel().gamma_factor(s) - smoothed_dirichlet_series(L, s, 100000)) <=
        1e-9);
}

TEST_CASE("functional equation and realness on the critical line") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> sig(-0.5, 1.5);
  std::uniform_real_distribution<double> ht(-20.0, 20.0);
  for (std::uint64_t q : {101ULL, 211ULL, 401ULL}) {
    auto kernel = std::make_shared<const LKernel>(delta_form(), CharacterTable::build(q));
    std::uniform_int_distribution<std::uint64_t> js(1, q - 2);
    for (int i = 0; i < 6; ++i) {
      TwistedL L(kernel, js(rng));
      TwistedL Lbar = L.conj();
      cplx s(sig(rng), ht(rng));
      cplx lhs = completed_lambda(L, s);
      cplx rhs = L.eps() * completed_lambda(Lbar, 1.0 - s);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale(L, s));
      cplx conj_check = completed_lambda(Lbar, std::conj(s));
      CHECK(std::abs(conj_check - std::conj(lhs)) <= 1e-10 * scale(L, s));
      double t = ht(rng);
      cplx rot = std::exp(cplx(0.0, -0.5 * std::arg(L.eps()))) * completed_lambda(L, cplx(0.5, t));
      CHECK(std::abs(rot.imag()) <= 1e-8 * std::abs(rot) + 1e-12 * scale(L, cplx(0.5, t)));
    }
  }
}

TEST_CASE("rotated and unrotated expansions agree") {
  AfeOptions plain;
  plain.rotation_loss = 1e6;
  auto table = CharacterTable::build(101);
  auto rotated = std::make_shared<const LKernel>(delta_form(), table);
  auto flat = std::make_shared<const LKernel>(delta_form(), table, plain);
  for (double t : {-9.0, 4.5, 8.0}) {
    for (std::uint64_t j : {1ULL, 40ULL}) {
      cplx s(0.7, t);
      cplx a = l_value(TwistedL(rotated, j), s);
      cplx b = l_value(TwistedL(flat, j), s);
      // The unrotated sum loses e^{pi |t| / 2} to cancellation.
      CHECK(std::abs(a - b) <= 1e-15 * std::exp(M_PI * std::abs(t) / 2.0) * 10.0);
    }
  }
  CHECK(rotated->rotation(2.0) == 0.0);
  CHECK(rotated->rotation(-30.0) < 0.0);
}

TEST_CASE("direct and AFE routes agree across the switch") {
  AfeOptions late;
  late.direct_sigma = 8.0;
  auto table = CharacterTable::build(101);
  auto standard = std::make_shared<const LKernel>(delta_form(), table);
  auto afe_only = std::make_shared<const LKernel>(delta_form(), table, late);
  for (cplx s : {cplx(5.5, 2.0), cplx(6.0, -7.0), cplx(-4.5, 3.0)}) {
    cplx a = l_value(TwistedL(standard, 5), s);
    cplx b = l_value(TwistedL(afe_only, 5), s);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("L values, conjugation and cutoffs") {
  auto table = CharacterTable::build(211);
  auto kernel = std::make_shared<const LKernel>(delta_form(), table);
  TwistedL L(kernel, 17);
  cplx s(0.5, 3.3);
  CHECK(std::abs(l_value(L.conj(), std::conj(s)) - std::conj(l_value(L, s))) <= 1e-9);
  for (double acc : {1e-8, 1e-10, 1e-13}) {
    AfeOptions o;
    o.target_accuracy = acc;
    LKernel k(delta_form(), table, o);
    double ratio = static_cast<double>(k.afe_cutoff(cplx(0.5, 0.5))) / (k.Q() * std::log(1.0 / acc));
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
  CHECK_THROWS_AS(l_value(L, cplx(0.5, 61.0)), DomainError);
  auto small = std::make_shared<const HeckeForm>(HeckeForm::delta(100));
  CHECK_THROWS_AS(l_value(TwistedL::make(small, 211, 1), cplx(0.5, 1.0)), ResourceError);
  CHECK_THROWS_AS(TwistedL(kernel, 0), DomainError);
}

TEST_CASE("logarithmic derivative") {
  auto kernel = std::make_shared<const LKernel>(delta_form(), CharacterTable::build(101));
  for (std::uint64_t j : {1ULL, 33ULL, 77ULL}) {
    TwistedL L(kernel, j);
    for (double t : {-3.0, 0.4, 6.0}) {
      cplx s(2.5, t);
      cplx series = log_derivative_series(L, s, 200000);
      CHECK(std::abs(log_derivative(L, s) - series) <= 1e-6);
      cplx conj_val = log_derivative(L.conj(), std::conj(s));
      CHECK(std::abs(conj_val - std::conj(log_derivative(L, s))) <= 1e-6);
    }
    cplx s1(1.0, 2.0);
    CHECK(std::abs(log_derivative(L, s1, 0.1) - log_derivative(L, s1, 0.05)) <= 1e-7);
  }
}
