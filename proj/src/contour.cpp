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


#include "twistarg/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

struct Unwrapper {
  const FamilyFn& f;
  cplx a;
  cplx b;
  const UnwrapOptions& options;
  PhaseTrack& track;
  double length;

  std::vector<cplx> eval(double u) {
    ++track.evaluations;
    return f(a + u * (b - a));
  }

  void refine(double u0, double u1, const std::vector<cplx>& f0, const std::vector<cplx>& f1) {
    const double um = 0.5 * (u0 + u1);
    std::vector<cplx> fm = eval(um);
    const std::size_t n = f0.size();
    std::vector<double> step(n, 0.0);
    std::vector<bool> ok(n, true);
    bool all_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (f0[i] == 0.0 || fm[i] == 0.0 || f1[i] == 0.0) {
        ok[i] = false;
      } else {
        double d1 = std::arg(fm[i] / f0[i]);
        double d2 = std::arg(f1[i] / fm[i]);
        step[i] = d1 + d2;
        ok[i] = std::abs(d1) < options.max_jump && std::abs(d2) < options.max_jump;
      }
      if (!ok[i] && !track.failed[i]) all_ok = false;
    }
    if (all_ok || (u1 - u0) * length < options.min_step) {
      for (std::size_t i = 0; i < n; ++i) {
        track.delta[i] += step[i];
        if (!ok[i] && !track.failed[i]) {
          track.failed[i] = true;
          track.fail_at[i] = u0;
        }
      }
      return;
    }
    refine(u0, um, f0, fm);
    refine(um, u1, fm, f1);
  }
};

}  // namespace

PhaseTrack unwrap_segment(const FamilyFn& f, cplx a, cplx b, const std::vector<cplx>& fa,
                          const std::vector<cplx>& fb, const UnwrapOptions& options) {
  if (fa.size() != fb.size()) throw ValidationError("unwrap_segment: endpoint value counts differ");
  PhaseTrack track;
  track.delta.assign(fa.size(), 0.0);
  track.failed.assign(fa.size(), false);
  track.fail_at.assign(fa.size(), -1.0);
  Unwrapper u{f, a, b, options, track, std::abs(b - a)};
  int parts = std::max(1, options.initial_intervals);
  if (options.max_step > 0.0) parts = std::max(parts, static_cast<int>(std::ceil(u.length / options.max_step)));
  std::vector<cplx> prev = fa;
  for (int k = 1; k <= parts; ++k) {
    double u1 = static_cast<double>(k) / parts;
    std::vector<cplx> next = k == parts ? fb : u.eval(u1);
    u.refine(static_cast<double>(k - 1) / parts, u1, prev, next);
    prev = std::move(next);
  }
  return track;
}

PhaseTrack join(const PhaseTrack& first, const PhaseTrack& second) {
  PhaseTrack out = first;
  for (std::size_t i = 0; i < out.delta.size(); ++i) {
    out.delta[i] += second.delta[i];
    if (second.failed[i] && !out.failed[i]) {
      out.failed[i] = true;
      out.fail_at[i] = second.fail_at[i];
    }
  }
  out.evaluations += second.evaluations;
  return out;
}

WindingResult winding_numbers(const FamilyFn& f, const Rect& r, const UnwrapOptions& options) {
  if (!(r.sigma1 > r.sigma0) || !(r.t1 > r.t0)) throw ValidationError("degenerate rectangle");
  const cplx c0(r.sigma0, r.t0);
  const cplx c1(r.sigma1, r.t0);
  const cplx c2(r.sigma1, r.t1);
  const cplx c3(r.sigma0, r.t1);
  auto v0 = f(c0);
  auto v1 = f(c1);
  auto v2 = f(c2);
  auto v3 = f(c3);
  PhaseTrack total = unwrap_segment(f, c0, c1, v0, v1, options);
  total = join(total, unwrap_segment(f, c1, c2, v1, v2, options));
  total = join(total, unwrap_segment(f, c2, c3, v2, v3, options));
  total = join(total, unwrap_segment(f, c3, c0, v3, v0, options));
  WindingResult out;
  out.evaluations = total.evaluations + 4;
  for (std::size_t i = 0; i < total.delta.size(); ++i) {
    double raw = total.delta[i] / (2.0 * std::numbers::pi);
    double rounded = std::round(raw);
    out.raw.push_back(raw);
    out.count.push_back(static_cast<long>(rounded));
    out.failed.push_back(total.failed[i] || std::abs(raw - rounded) > 0.05);
  }
  return out;
}

FamilyFn as_family(ScalarFn f) {
  return [f = std::move(f)](cplx s) { return std::vector<cplx>{f(s)}; };
}

namespace {

struct Locator {
  const ScalarFn& f;
  FamilyFn family;
  double tolerance;
  const UnwrapOptions& options;
  std::vector<LocatedZero> found;

  long count(const Rect& r) {
    auto w = winding_numbers(family, r, options);
    if (w.failed[0]) return -1;
    return w.count[0];
  }

  cplx polish(cplx z, const Rect& r) {
    const double size = std::max(r.sigma1 - r.sigma0, r.t1 - r.t0);
    for (int it = 0; it < 60; ++it) {
      double h = std::max(1e-7, 1e-3 * size);
      cplx fz = f(z);
      cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
      if (d == 0.0) break;
      cplx step = fz / d;
      z -= step;
      if (std::abs(step) < tolerance) break;
    }
    return z;
  }

  void search(const Rect& r, long n, int depth) {
    if (n == 0) return;
    const double w = r.sigma1 - r.sigma0;
    const double h = r.t1 - r.t0;
    const double size = std::max(w, h);
    if ((n == 1 && size < 1e-2) || size < 1e-5 || depth > 60) {
      cplx center(0.5 * (r.sigma0 + r.sigma1), 0.5 * (r.t0 + r.t1));
      cplx z = n == 1 ? polish(center, r) : center;
      if (std::abs(z - center) > size) z = center;
      found.push_back({z, n, size});
      return;
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
      double frac = 0.5 + 0.0137 * attempt;
      Rect a = r;
      Rect b = r;
      if (w >= h) {
        a.sigma1 = b.sigma0 = r.sigma0 + frac * w;
      } else {
        a.t1 = b.t0 = r.t0 + frac * h;
      }
      long na = count(a);
      long nb = count(b);
      if (na < 0 || nb < 0) continue;
      if (na + nb != n) continue;
      search(a, na, depth + 1);
      search(b, nb, depth + 1);
      return;
    }
    throw NumericError("locate_zeros: could not split box [" + std::to_string(r.sigma0) + ", " +
                       std::to_string(r.sigma1) + "] x [" + std::to_string(r.t0) + ", " + std::to_string(r.t1) + "]");
  }
};

}  // namespace

std::vector<LocatedZero> locate_zeros(const ScalarFn& f, const Rect& r, double tolerance,
                                      const UnwrapOptions& options) {
  Locator loc{f, as_family(f), tolerance, options, {}};
  long n = loc.count(r);
  if (n < 0) throw NumericError("locate_zeros: boundary of the search box passes through a zero");
  loc.search(r, n, 0);
  return loc.found;
}

}  // namespace twistarg
