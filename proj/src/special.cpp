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


#include "twistarg/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr double kShift = 12.0;

// B_{2k} / (2k (2k - 1)), k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,    1.0 / 156.0,           -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0,
};

// B_{2k} / (2k), k = 1..10.
constexpr std::array<double, 10> kDigamma = {
    1.0 / 12.0,        -1.0 / 120.0,       1.0 / 252.0,          -1.0 / 240.0,
    1.0 / 132.0,       -691.0 / 32760.0,   1.0 / 12.0,           -3617.0 / 8160.0,
    43867.0 / 14364.0, -174611.0 / 6600.0,
};

cplx gamma_series_lower(cplx w, cplx z) {
  // gamma(w, z) = z^w e^{-z} sum_k z^k / (w (w+1) ... (w+k))
  cplx term = 1.0 / w;
  cplx sum = term;
  cplx ap = w;
  for (int k = 1; k < 100000; ++k) {
    ap += 1.0;
    term *= z / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum * std::exp(w * std::log(z) - z);
  }
  throw NumericError("lower incomplete gamma series did not converge");
}

cplx gamma_continued_fraction(cplx w, cplx z) {
  // Legendre continued fraction, modified Lentz.
  cplx b = z + 1.0 - w;
  cplx c = 1.0 / kTiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 100000; ++i) {
    cplx an = -static_cast<double>(i) * (static_cast<double>(i) - w);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return std::exp(w * std::log(z) - z) * h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  cplx shift_log = 0.0;
  while (z.real() < kShift) {
    shift_log += std::log(z);
    z += 1.0;
  }
  cplx inv = 1.0 / z;
  cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv;
  for (double b : kStirling) {
    series += b * pw;
    pw *= inv2;
  }
  cplx out = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
  return out - shift_log;
}

cplx gamma(cplx z) {
  return std::exp(log_gamma(z));
}

cplx digamma(cplx z) {
  if (z.real() < 0.5) return digamma(1.0 - z) - kPi / std::tan(kPi * z);
  cplx acc = 0.0;
  while (z.real() < kShift) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  cplx inv2 = 1.0 / (z * z);
  cplx series = 0.0;
  cplx pw = inv2;
  for (double b : kDigamma) {
    series += b * pw;
    pw *= inv2;
  }
  return acc + std::log(z) - 0.5 / z - series;
}

cplx upper_gamma(cplx w, cplx z) {
  if (z == cplx(0.0, 0.0)) return gamma(w);
  if (z.real() <= 0.0) throw DomainError("upper_gamma: Re z must be positive");
  if (std::abs(z) > std::abs(w) + 1.0) return gamma_continued_fraction(w, z);
  if (w.real() >= 0.5) return gamma(w) - gamma_series_lower(w, z);
  // Downward recurrence Gamma(w, z) = (Gamma(w + 1, z) - z^w e^{-z}) / w.
  int m = static_cast<int>(std::ceil(0.5 - w.real()));
  cplx top = w + static_cast<double>(m);
  cplx g = gamma(top) - gamma_series_lower(top, z);
  cplx log_z = std::log(z);
  for (int i = m - 1; i >= 0; --i) {
    cplx wi = w + static_cast<double>(i);
    g = (g - std::exp(wi * log_z - z)) / wi;
  }
  return g;
}

double log_upper_gamma_bound(double a, double y) {
  double full = std::lgamma(a);
  if (a <= 1.0) {
    double tail = (a - 1.0) * std::log(y) - y;
    return a > 0.0 ? std::min(full, tail) : tail;
  }
  if (y <= a - 1.0) return full;
  double tail = (a - 1.0) * std::log(y) - y + std::log(y / (y - (a - 1.0)));
  return std::min(full, tail);
}

}  // namespace twistarg
