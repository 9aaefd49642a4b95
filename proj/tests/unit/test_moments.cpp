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
#include <numbers>
#include <random>

#include "doctest.h"
#include "twistarg/errors.hpp"
#include "twistarg/moments.hpp"

using namespace twistarg;

namespace {

std::shared_ptr<const HeckeForm> form_1e5() {
  static auto form = std::make_shared<const HeckeForm>(HeckeForm::delta(100000));
  return form;
}

std::shared_ptr<const LKernel> kernel(std::uint64_t q) {
  return std::make_shared<const LKernel>(form_1e5(), CharacterTable::build(q));
}

}  // namespace

TEST_CASE("moment constants against factorials") {
  constexpr double pi = std::numbers::pi;
  for (int n = 0; n <= 8; ++n) {
    // (2n)! / n! as an exact integer, then one division by (2 pi)^{2n}.
    unsigned long long num = 1;
    for (int k = n + 1; k <= 2 * n; ++k) num *= static_cast<unsigned long long>(k);
    const long double ref = static_cast<long double>(num) / std::pow(2.0L * std::numbers::pi_v<long double>, 2 * n);
    CHECK(std::abs(moment_constant(n) - static_cast<double>(ref)) <= 1e-15 * static_cast<double>(ref));
  }
  CHECK(moment_constant(1) == doctest::Approx(1.0 / (2 * pi * pi)).epsilon(1e-16));
  CHECK(moment_constant(1) == doctest::Approx(0.05066059182116888572).epsilon(1e-15));
  CHECK(moment_constant(2) == doctest::Approx(0.007699486691013251392).epsilon(1e-15));
  CHECK(moment_constant(4) == doctest::Approx(0.0006916244452260521853).epsilon(1e-15));
  CHECK_THROWS_AS(moment_constant(-1), DomainError);
}

TEST_CASE("prime sums") {
  auto form = form_1e5();
  auto st = prime_sum_stats(*form, 100.0);
  CHECK(st.primes == 25);
  CHECK(st.inv_p == doctest::Approx(1.802817201048870939871616).epsilon(1e-15));
  CHECK(st.log_p == doctest::Approx(3.369470874998981871388071).epsilon(1e-15));
  CHECK(st.log2_p == doctest::Approx(8.738067788720218605281205).epsilon(1e-15));
  CHECK(st.lambda2_p == doctest::Approx(0.8690134446666660401443692).epsilon(1e-14));
  CHECK(st.loglog_x == doctest::Approx(std::log(std::log(100.0))));
  CHECK(prime_sum_stats(*form, 20.0).lambda2_p == doctest::Approx(0.614536890709376287355042).epsilon(1e-14));

  // Mertens residual settles near 0.2615; the Hecke sum stays within O(1) of log log x.
  for (double x : {1e3, 1e4, 1e5}) {
    auto s = prime_sum_stats(*form, x);
    CHECK(std::abs(s.inv_p - s.loglog_x - 0.2615) < 0.01);
    CHECK(std::abs(s.log_p - s.log_x) < 2.0);
    CHECK(s.log2_p < s.log2_x);
    CHECK(std::abs(s.lambda2_p - s.loglog_x) < 2.0);
  }
  CHECK_THROWS_AS(prime_sum_stats(*form, 2e5), ResourceError);
  CHECK_THROWS_AS(prime_sum_stats(*form, 1.5), DomainError);
}

TEST_CASE("diagonal oracle") {
  auto k101 = kernel(101);
  auto k53 = kernel(53);

  auto a = diagonal_oracle(*k101, 20, 1.0, 1);
  CHECK(std::abs(a.difference) <= 1e-9);
  CHECK(a.closed_form == doctest::Approx(100 * 0.614536890709376287355042).epsilon(1e-14));
  CHECK(std::abs(a.closed_form - a.orthogonal) <= 1e-12);
  CHECK(a.tuples == 8);

  auto b = diagonal_oracle(*k101, 20, 1.0, 2);
  CHECK(std::abs(b.difference) <= 1e-9);
  CHECK(std::isnan(b.closed_form));

  auto c = diagonal_oracle(*k53, 30, 1.0, 1);
  CHECK(std::abs(c.difference) <= 1e-9);
  CHECK(c.closed_form == doctest::Approx(52 * 0.6769985438575280350361419).epsilon(1e-14));

  // Principal term from the untwisted sum.
  cplx P0(0.0, 0.0);
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19}) {
    P0 += form_1e5()->lambda(p) * std::exp(-cplx(0.5, 1.0) * std::log(static_cast<double>(p)));
  }
  CHECK(a.principal == doctest::Approx(std::norm(P0)).epsilon(1e-13));
  CHECK(a.primitive == doctest::Approx(a.direct - a.principal));

  // Random small configurations, including x3 >= q where residues wrap.
  std::mt19937_64 rng(20261016);
  const std::uint64_t qs[] = {11, 13, 29, 53, 101};
  for (int trial = 0; trial < 12; ++trial) {
    const std::uint64_t q = qs[rng() % 5];
    const std::uint64_t x3 = 5 + rng() % 26;
    const int n = 1 + static_cast<int>(rng() % 2);
    const double t = std::uniform_real_distribution<double>(0.1, 20.0)(rng);
    auto o = diagonal_oracle(*kernel(q), x3, t, n);
    CAPTURE(q);
    CAPTURE(x3);
    CAPTURE(n);
    CHECK(std::abs(o.difference) <= 1e-9 * std::max(1.0, o.direct));
  }

  CHECK_THROWS_AS(diagonal_oracle(*k101, 10000, 1.0, 2), ResourceError);
  CHECK_THROWS_AS(diagonal_oracle(*k101, 20, 1.0, 0), DomainError);
}

TEST_CASE("second moment of M from orthogonality") {
  auto k = kernel(101);
  auto asm20 = assemble_m2(*k, 20, 1.0);
  CHECK(asm20.off_diagonal == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(asm20.average == doctest::Approx(0.03132805435676383705924018).epsilon(1e-13));

  auto rep = sweep_moments(*k, 1.0, 20, {1});
  CHECK(std::abs(rep.rows[0].m_moment - asm20.average) <= 1e-9);

  // Past sqrt(q) products of two primes wrap around to 1 mod q.
  auto asm97 = assemble_m2(*k, 97, 1.0);
  auto rep97 = sweep_moments(*k, 1.0, 97, {1});
  CHECK(asm97.off_diagonal != 0.0);
  CHECK(std::abs(rep97.rows[0].m_moment - asm97.average) <= 1e-9);
}

TEST_CASE("moment sweep") {
  auto k = kernel(101);
  auto rep = sweep_moments(*k, 1.0, 64, {1, 2, 3});
  CHECK(rep.characters == 99);
  CHECK(rep.samples.size() == 99);
  CHECK(rep.samples.front().j == 1);
  CHECK(rep.samples.back().j == 99);
  CHECK(rep.loglog_q == doctest::Approx(std::log(std::log(101.0))));
  for (const auto& row : rep.rows) {
    CAPTURE(row.n);
    CHECK(row.holder_ok);
    CHECK(row.constant == moment_constant(row.n));
    CHECK(row.prediction_prime_sum == doctest::Approx(row.constant * std::pow(rep.prime_sum, row.n)));
  }
  for (const auto& s : rep.samples) CHECK(s.R == doctest::Approx(s.S - s.M).epsilon(1e-15));

  SweepOptions seq;
  seq.chunk = 16;
  SweepOptions par = seq;
  par.workers = 3;
  auto rep1 = sweep_moments(*k, 1.0, 64, {1, 2, 3}, seq);
  auto rep3 = sweep_moments(*k, 1.0, 64, {1, 2, 3}, par);
  for (std::size_t i = 0; i < rep1.samples.size(); ++i) CHECK(rep1.samples[i].S == rep3.samples[i].S);
  CHECK(rep1.rows[2].s_moment == rep3.rows[2].s_moment);
  CHECK(std::abs(rep1.rows[0].s_moment - rep.rows[0].s_moment) < 1e-10);

  CHECK_THROWS_AS(sweep_moments(*k, 0.0, 64, {1}), DomainError);
  CHECK_THROWS_AS(sweep_moments(*k, 1.0, 64, {}), DomainError);
  CHECK_THROWS_AS(sweep_moments(*k, 1.0, 64, {0}), DomainError);
  CHECK_THROWS_AS(sweep_moments(*k, 1.0, 200000, {1}), ResourceError);
  CHECK(default_x_cubed(101) == 64);
  CHECK(default_x_cubed(1000003) == 1000);
}

TEST_CASE("sweep nudges past a zero on the path") {
  auto k = kernel(101);
  TwistedL L(k, 1);
  auto zl = find_zeros_on_line(L, 0.1, 0.5, 0.05);
  REQUIRE(!zl.ordinates.empty());
  auto sw = sweep_s(*k, zl.ordinates[0], 20);
  CHECK(sw.nudged >= 1);
  CHECK(sw.samples.size() == 99);
  CHECK(sw.samples[0].nudged);
  CHECK(sw.samples[0].t == doctest::Approx(zl.ordinates[0] + 1e-3).epsilon(1e-12));
  std::size_t flagged = 0;
  for (const auto& s : sw.samples) flagged += s.nudged ? 1 : 0;
  CHECK(flagged == sw.nudged);

  SweepOptions none;
  none.max_nudges = 0;
  CHECK_THROWS_AS(sweep_s(*k, zl.ordinates[0], 20, none), NumericError);
}

TEST_CASE("Gaussian comparison") {
  CHECK(clt_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-16));
  const double sd = 1.0 / (std::numbers::pi * std::sqrt(2.0));
  CHECK(clt_cdf(sd) == doctest::Approx(0.8413447460685429).epsilon(1e-14));

  // Midpoint quantiles of the target law sit within 1/(2N) of it.
  std::vector<double> v;
  const int N = 500;
  for (int i = 0; i < N; ++i) {
    double u = (i + 0.5) / N;
    double lo = -5.0, hi = 5.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (clt_cdf(mid) < u ? lo : hi) = mid;
    }
    v.push_back(2.0 * lo);
  }
  auto g = clt_from_values(v, 2.0, 30);
  CHECK(g.ks_distance == doctest::Approx(0.5 / N).epsilon(1e-6));
  double mass = 0.0, gm = 0.0;
  for (const auto& b : g.histogram) {
    mass += b.mass;
    gm += b.gaussian_mass;
  }
  CHECK(std::abs(mass - 1.0) <= 1e-12);
  CHECK(gm > 0.9999);

  std::vector<double> wide{-3.0, 0.0, 0.1, 5.0};
  auto w = clt_from_values(wide, 1.0, 7);
  double m2 = 0.0;
  for (const auto& b : w.histogram) m2 += b.mass;
  CHECK(std::abs(m2 - 1.0) <= 1e-12);
  CHECK(w.histogram.back().right >= 5.0);
  CHECK(w.ks_distance > 0.2);

  auto k = kernel(101);
  auto c = clt_distribution(*k, 1.0, 20);
  CHECK(c.characters == 99);
  CHECK(c.scale == doctest::Approx(std::sqrt(std::log(std::log(101.0)))));
  CHECK(c.ks_distance < 0.3);
  CHECK_THROWS_AS(clt_distribution(*k, -1.0, 20), DomainError);
  CHECK_THROWS_AS(clt_from_values(wide, 1.0, 0), DomainError);
}

TEST_CASE("large sieve averages") {
  auto table = CharacterTable::build(53);
  auto r = large_sieve_ratio(*table, std::sqrt(53.0), 2);
  double w = 0.0, s = 0.0;
  for (std::uint64_t j = 1; j < 52; ++j) {
    DirichletCharacter chi(table, j);
    cplx a(0.0, 0.0), b(0.0, 0.0);
    for (std::uint64_t p : {2, 3, 5, 7}) {
      const double pd = static_cast<double>(p);
      a += std::log(pd) / std::log(std::sqrt(53.0)) / std::sqrt(pd) * chi.value(static_cast<std::int64_t>(p));
      b += chi.value(static_cast<std::int64_t>(p * p)) / pd;
    }
    w += std::pow(std::abs(a), 4);
    s += std::pow(std::abs(b), 4);
  }
  CHECK(r.weighted == doctest::Approx(w / 53).epsilon(1e-12));
  CHECK(r.squares == doctest::Approx(s / 53).epsilon(1e-12));

  // Bounded across the modulus grid.
  for (std::uint64_t q : {101, 211, 401, 809}) {
    auto t = CharacterTable::build(q);
    for (int n : {1, 2}) {
      auto x = large_sieve_ratio(*t, std::pow(static_cast<double>(q), 1.0 / n), n);
      CHECK(x.weighted < 1.0);
      CHECK(x.squares < 1.0);
    }
  }
  CHECK_THROWS_AS(large_sieve_ratio(*table, 60.0, 1), DomainError);
  CHECK_THROWS_AS(large_sieve_ratio(*table, 1.0, 1), DomainError);
}
