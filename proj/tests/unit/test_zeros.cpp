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


#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "twistarg/errors.hpp"
#include "twistarg/zeros.hpp"

using namespace twistarg;

namespace {

std::shared_ptr<const HeckeForm> small_delta() {
  static auto form = std::make_shared<const HeckeForm>(HeckeForm::delta(20000));
  return form;
}

}  // namespace

TEST_CASE("hardy Z is real and zeros of the conjugate twist mirror") {
  auto L = TwistedL::make(small_delta(), 37, 5);
  for (double t : {0.0, 1.3, 4.7, 9.9}) {
    auto h = hardy_z_value(L, t);
    CHECK(std::abs(h.imag) <= 1e-10 * h.scale);
  }
  auto zl = find_zeros_on_line(L, 0.0, 6.0, 0.05);
  auto zc = find_zeros_on_line(L.conj(), -6.0, 0.0, 0.05);
  REQUIRE(zl.audit_ok);
  REQUIRE(zc.audit_ok);
  REQUIRE(zl.ordinates.size() == zc.ordinates.size());
  REQUIRE(!zl.ordinates.empty());
  for (std::size_t i = 0; i < zl.ordinates.size(); ++i) {
    CHECK(zl.ordinates[i] == doctest::Approx(-zc.ordinates[zc.ordinates.size() - 1 - i]).epsilon(1e-8));
  }
  for (double g : zl.ordinates) {
    double scale = std::max(std::abs(hardy_z(L, g - 0.05)), std::abs(hardy_z(L, g + 0.05)));
    CHECK(std::abs(hardy_z(L, g)) <= 1e-7 * scale);
  }
}

TEST_CASE("rectangle counts agree with the line scan and with 2-D location") {
  auto L = TwistedL::make(small_delta(), 37, 5);
  auto zl = find_zeros_on_line(L, 0.0, 4.0, 0.05);
  auto rc = count_zeros_rectangle(L, 0.45, 3.0, 0.0, 4.0);
  CHECK(rc.count == static_cast<long>(zl.ordinates.size()));
  CHECK(std::abs(rc.raw - std::round(rc.raw)) < 0.05);

  UnwrapOptions fine;
  fine.max_step = 0.05;
  CHECK(count_zeros_rectangle(L, 0.45, 3.0, 0.0, 4.0, fine).count == rc.count);
  CHECK(count_zeros_rectangle(L, 1.5, 3.0, 0.0, 10.0).count == 0);

  auto located = locate_zeros([&](cplx s) { return l_value(L, s); }, rc.box, 1e-10);
  long total = 0;
  for (const auto& z : located) {
    total += z.multiplicity;
    CHECK(std::abs(z.z.real() - 0.5) < 1e-6);
    auto it = std::min_element(zl.ordinates.begin(), zl.ordinates.end(),
                               [&](double a, double b) { return std::abs(a - z.z.imag()) < std::abs(b - z.z.imag()); });
    CHECK(std::abs(*it - z.z.imag()) < 1e-7);
  }
  CHECK(total == rc.count);
}

TEST_CASE("odd quadratic twist has a forced central zero") {
  // 43 = 3 mod 4: the quadratic character is odd, so the root number is -1.
  auto L = TwistedL::make(small_delta(), 43, 21);
  REQUIRE(std::abs(L.eps() + 1.0) < 1e-12);
  auto zl = find_zeros_on_line(L, 0.0, 3.0, 0.05);
  REQUIRE(zl.audit_ok);
  CHECK(zl.nudges >= 1);
  REQUIRE(!zl.ordinates.empty());
  CHECK(std::abs(zl.ordinates.front()) < 1e-8);
}

TEST_CASE("family counts match one-at-a-time counts") {
  auto kernel = std::make_shared<const LKernel>(small_delta(), CharacterTable::build(11));
  std::vector<std::uint64_t> js{1, 2, 3, 4, 6, 7};
  std::vector<double> sigmas{0.45, 0.6, 0.9};
  auto fc = count_zeros_family(kernel, js, sigmas, 3.0, 0.5, 5.0);
  for (std::size_t c = 0; c < js.size(); ++c) {
    TwistedL L(kernel, js[c]);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      CHECK(fc.counts[i][c].count == count_zeros_rectangle(L, sigmas[i], 3.0, 0.5, 5.0).count);
    }
    CHECK(fc.counts[0][c].count >= fc.counts[1][c].count);
  }
  CHECK(fc.counts[0][0].count > 0);
}

TEST_CASE("density table and n_avg") {
  auto kernel = std::make_shared<const LKernel>(small_delta(), CharacterTable::build(11));
  std::vector<double> sigmas{0.95, 0.45, 0.7};
  auto dt = density_table(kernel, sigmas, 0.0, 3.0);
  REQUIRE(dt.rows.size() == 3);
  CHECK(dt.rows[0].sigma == 0.45);
  CHECK(dt.monotone);
  CHECK(dt.characters == 9);
  CHECK(dt.rows[0].n_avg > 0.0);
  CHECK_FALSE(dt.rows[0].in_hypothesis_range);
  CHECK(dt.rows[2].in_hypothesis_range);
  CHECK(n_avg(kernel, 0.95, 0.0, 3.0) == 0.0);
  CHECK_THROWS_AS(n_avg(kernel, 0.9, 0.0, 3.0), DomainError);
  CHECK_THROWS_AS(n_avg(kernel, 0.95, 0.0, 0.1), DomainError);
}

TEST_CASE("weighted zero identity on exponential test functions") {
  // 1 - 8^{-s}/8 has a single zero at -1 in the window (-1, 1).
  double a = 0.125;
  double b = 8.0;
  REQUIRE(exponential_growth_ok(b, -1.0, 1.0));
  auto zs = exponential_omega_zeros(a, b, -1.0, 1.0);
  REQUIRE(zs.size() == 1);
  auto sc = selberg_identity_check(exponential_deviation(a, b), zs, -2.0, -1.0, 1.0);
  CHECK(sc.lhs == doctest::Approx(9.205195609229179493852).epsilon(1e-14));
  CHECK(sc.residual <= 1e-6);

  // Zero-free right of sigma'.
  auto none = selberg_identity_check(exponential_deviation(0.01, b), exponential_omega_zeros(0.01, b, -1.0, 1.0), 0.0,
                                     -1.0, 1.0);
  CHECK(none.zeros_used == 0);
  CHECK(std::abs(none.rhs) <= 1e-6);

  // Numerically located zeros give the same left side.
  auto located = omega_zeros(exponential_deviation(a, b), -2.0, 5.0, -1.0, 1.0);
  REQUIRE(located.size() == 1);
  CHECK(std::abs(located[0] - cplx(-1.0, 0.0)) < 1e-9);

  CHECK_FALSE(exponential_growth_ok(2.0, -1.0, 1.0));
  CHECK_THROWS_AS(selberg_identity_check(exponential_deviation(0.5, 2.0), exponential_omega_zeros(0.5, 2.0, -1.0, 1.0),
                                         -2.0, -1.0, 1.0),
                  DomainError);

  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    double H = 1.0 + 3.0 * u(rng);
    double t1 = -3.0 + 6.0 * u(rng);
    double bb = std::exp(std::numbers::pi / H + 0.5 + 2.5 * u(rng));
    double aa = std::exp(-3.0 + 6.0 * u(rng));
    double sp = std::log(aa) / std::log(bb) - 2.0 + 2.5 * u(rng);
    auto z = exponential_omega_zeros(aa, bb, t1, t1 + H);
    auto r = selberg_identity_check(exponential_deviation(aa, bb), z, sp, t1, t1 + H);
    CHECK(r.residual <= 1e-6);
  }
}
