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
#include <numeric>
#include <random>

#include "doctest.h"
#include "twistarg/arith.hpp"
#include "twistarg/characters.hpp"
#include "twistarg/errors.hpp"

using namespace twistarg;

namespace {

// Brute force: smallest g whose powers hit every residue.
std::uint64_t brute_primitive_root(std::uint64_t q) {
  for (std::uint64_t g = 2; g < q; ++g) {
    std::uint64_t x = 1;
    std::uint64_t order = 0;
    do {
      x = x * g % q;
      ++order;
    } while (x != 1);
    if (order == q - 1) return g;
  }
  return 0;
}

}  // namespace

TEST_CASE("table construction") {
  auto t7 = CharacterTable::build(7);
  CHECK(t7->generator() == 3);
  CHECK(t7->dlog(2) == 2);
  CHECK_THROWS_AS(CharacterTable::build(9), ValidationError);
  CHECK_THROWS_AS(CharacterTable::build(2), ValidationError);
  CHECK_THROWS_AS(CharacterTable::build(1), ValidationError);
  for (std::uint64_t q : {5ULL, 101ULL, 1009ULL, 2003ULL}) {
    auto t = CharacterTable::build(q);
    CHECK(t->generator() == brute_primitive_root(q));
    std::vector<bool> seen(q - 1, false);
    for (std::uint64_t a = 1; a < q; ++a) {
      auto k = t->dlog(a);
      CHECK(powmod(t->generator(), k, q) == a);
      CHECK(!seen[k]);
      seen[k] = true;
    }
  }
  CHECK(CharacterTable::build(1009)->generator() == 11);
}

TEST_CASE("character values") {
  auto t = CharacterTable::build(7);
  DirichletCharacter chi0(t, 0);
  for (std::int64_t a = 1; a < 7; ++a) CHECK(chi0.value(a) == cplx(1.0, 0.0));
  DirichletCharacter chi1(t, 1);
  CHECK(std::abs(chi1.value(3) - cplx(0.5, std::sqrt(3.0) / 2.0)) < 1e-15);
  CHECK(chi1.value(14) == cplx(0.0, 0.0));
  DirichletCharacter quad(t, 3);
  for (std::int64_t a = 1; a < 7; ++a) {
    bool residue = false;
    for (std::int64_t b = 1; b < 7; ++b) residue = residue || (b * b) % 7 == a;
    CHECK(std::abs(quad.value(a) - cplx(residue ? 1.0 : -1.0, 0.0)) < 1e-15);
  }
  CHECK(chi1.value(-1) == chi1.value(6));
  CHECK(chi1.parity() == -1);
  CHECK(chi1.conj().index() == 5);
}

TEST_CASE("enumeration") {
  CHECK(enumerate_primitive(CharacterTable::build(5)).size() == 3);
  CHECK(enumerate_primitive(CharacterTable::build(3)).size() == 1);
  auto chars = enumerate_primitive(CharacterTable::build(11));
  for (std::size_t i = 0; i < chars.size(); ++i) {
    CHECK(chars[i].index() == i + 1);
    CHECK(chars[i].conj().index() == 10 - chars[i].index());
  }
}

TEST_CASE("Gauss sums") {
  auto t5 = CharacterTable::build(5);
  cplx e = gauss_sum(DirichletCharacter(t5, 2));
  CHECK(std::abs(e - cplx(1.0, 0.0)) < 1e-14);
  CHECK_THROWS_AS(gauss_sum(DirichletCharacter(t5, 0)), DomainError);
  for (std::uint64_t q : {3ULL, 5ULL, 7ULL, 53ULL, 101ULL}) {
    auto t = CharacterTable::build(q);
    for (const auto& chi : enumerate_primitive(t)) {
      cplx g = gauss_sum(chi);
      CHECK(std::abs(std::abs(g) - 1.0) <= 1e-10);
      // Independent sum with recomputed exponentials.
      cplx direct = 0.0;
      for (std::uint64_t a = 1; a < q; ++a) {
        double ang = 2.0 * M_PI * (static_cast<double>(chi.index() * t->dlog(a) % (q - 1)) / (q - 1) +
                                   static_cast<double>(a) / q);
        direct += std::polar(1.0, ang);
      }
      cplx product = direct * gauss_sum(chi.conj()) * std::sqrt(static_cast<double>(q)) / static_cast<double>(q);
      CHECK(std::abs(product - static_cast<double>(chi.parity())) <= 1e-10);
    }
  }
}

TEST_CASE("orthogonality and multiplicativity") {
  std::mt19937_64 rng(99);
  for (std::uint64_t q : {101ULL, 211ULL, 499ULL}) {
    auto t = CharacterTable::build(q);
    std::uniform_int_distribution<std::int64_t> dist(1, 100000);
    for (int trial = 0; trial < 50; ++trial) {
      std::int64_t m = dist(rng);
      std::int64_t n = trial % 5 == 0 ? m + static_cast<std::int64_t>(q) * (trial + 1) : dist(rng);
      if (m % static_cast<std::int64_t>(q) == 0 || n % static_cast<std::int64_t>(q) == 0) continue;
      cplx sum = 0.0;
      for (std::uint64_t j = 0; j < q - 1; ++j) {
        DirichletCharacter chi(t, j);
        sum += chi.value(m) * std::conj(chi.value(n));
      }
      double expected = (m - n) % static_cast<std::int64_t>(q) == 0 ? static_cast<double>(q - 1) : 0.0;
      CHECK(std::abs(sum - expected) <= 1e-9);
    }
    for (int trial = 0; trial < 1000; ++trial) {
      DirichletCharacter chi(t, static_cast<std::uint64_t>(dist(rng)) % (q - 1));
      std::int64_t a = dist(rng);
      std::int64_t b = dist(rng);
      cplx lhs = chi.value(a * b);
      cplx rhs = chi.value(a) * chi.value(b);
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}
