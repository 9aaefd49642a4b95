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
#include "twistarg/contour.hpp"

using namespace twistarg;

TEST_CASE("winding numbers of polynomials") {
  auto poly = [](cplx z) { return (z - cplx(0.3, 0.2)) * (z - cplx(0.7, 0.5)) * (z - cplx(0.7, 0.5)) * (z - 3.0); };
  auto fam = as_family(poly);
  auto w = winding_numbers(fam, {0.0, 1.0, 0.0, 1.0});
  CHECK(!w.failed[0]);
  CHECK(w.count[0] == 3);
  CHECK(std::abs(w.raw[0] - 3.0) < 1e-9);
  CHECK(winding_numbers(fam, {0.5, 1.0, 0.0, 1.0}).count[0] == 2);
  CHECK(winding_numbers(fam, {2.0, 2.5, -1.0, 1.0}).count[0] == 0);
  // Zero exactly on the boundary.
  auto on_edge = winding_numbers(fam, {0.3, 1.0, 0.0, 1.0});
  CHECK(on_edge.failed[0]);
}

TEST_CASE("family unwrapping tracks members independently") {
  FamilyFn fam = [](cplx z) {
    return std::vector<cplx>{z - cplx(0.5, 0.5), std::exp(cplx(0.0, 40.0) * z), cplx(1.0, 0.0)};
  };
  auto w = winding_numbers(fam, {0.0, 1.0, 0.0, 1.0});
  CHECK(w.count == std::vector<long>{1, 0, 0});
  auto track = unwrap_segment(fam, 0.0, 1.0, fam(0.0), fam(1.0));
  CHECK(track.delta[1] == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("locate zeros by subdivision") {
  auto poly = [](cplx z) { return (z - cplx(0.31, 0.2)) * (z - cplx(0.72, 0.55)) * (z + 2.0); };
  auto zs = locate_zeros(poly, {0.0, 1.0, 0.0, 1.0}, 1e-12);
  REQUIRE(zs.size() == 2);
  std::sort(zs.begin(), zs.end(), [](const auto& a, const auto& b) { return a.z.real() < b.z.real(); });
  CHECK(std::abs(zs[0].z - cplx(0.31, 0.2)) < 1e-10);
  CHECK(std::abs(zs[1].z - cplx(0.72, 0.55)) < 1e-10);
  // 1 - a b^{-s}: zeros at log a / log b + 2 pi i k / log b.
  double a = 0.125;
  double b = 8.0;
  auto omega = [&](cplx s) { return 1.0 - a * std::exp(-s * std::log(b)); };
  auto oz = locate_zeros(omega, {-2.0, 0.5, -1.0, 4.0}, 1e-12);
  REQUIRE(oz.size() == 2);
  for (const auto& z : oz) {
    CHECK(std::abs(z.z.real() + 1.0) < 1e-10);
    double k = z.z.imag() * std::log(b) / (2.0 * M_PI);
    CHECK(std::abs(k - std::round(k)) < 1e-10);
  }
}
