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


#include "twistarg/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

constexpr double kPi = std::numbers::pi;

FamilyFn l_family(const TwistedL& L) {
  auto kernel = L.kernel_ptr();
  std::uint64_t j = L.index();
  return [kernel, j](cplx s) { return kernel->evaluate(s, std::span<const std::uint64_t>(&j, 1), Output::L); };
}

Rect nudged(Rect r, int k) {
  double d = 1.618e-3 * k;
  r.sigma0 -= 0.5 * d;
  r.t0 -= d;
  r.t1 += d;
  return r;
}

constexpr int kMaxNudges = 8;

struct Scan {
  std::vector<double> ordinates;
  double max_abs_z = 0.0;
};

Scan scan_line(const TwistedL& L, double a, double b, double step, double tol) {
  Scan out;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step)));
  std::vector<double> ts(n + 1);
  std::vector<double> zs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    ts[i] = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    zs[i] = hardy_z(L, ts[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (zs[i] == 0.0) {
      out.ordinates.push_back(ts[i]);
      continue;
    }
    if (zs[i + 1] == 0.0 || (zs[i] > 0) == (zs[i + 1] > 0)) continue;
    double lo = ts[i];
    double hi = ts[i + 1];
    double zlo = zs[i];
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      double zm = hardy_z(L, mid);
      if (zm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((zm > 0) == (zlo > 0)) {
        lo = mid;
        zlo = zm;
      } else {
        hi = mid;
      }
    }
    double g = 0.5 * (lo + hi);
    out.ordinates.push_back(g);
    out.max_abs_z = std::max(out.max_abs_z, std::abs(hardy_z(L, g)));
  }
  if (zs[n] == 0.0) out.ordinates.push_back(ts[n]);
  return out;
}

}  // namespace

HardyValue hardy_z_value(const TwistedL& L, double t) {
  const cplx s(0.5, t);
  std::uint64_t j = L.index();
  cplx lam = L.kernel().evaluate(s, std::span<const std::uint64_t>(&j, 1), Output::Completed)[0];
  double g = std::abs(L.kernel().gamma_factor(s));
  cplx rot = std::polar(1.0, -0.5 * std::arg(L.eps())) * lam / g;
  return {rot.real(), rot.imag(), std::abs(rot)};
}

double hardy_z(const TwistedL& L, double t) {
  HardyValue h = hardy_z_value(L, t);
  if (std::abs(h.imag) > 1e-8 * h.scale + 1e-12) {
    throw NumericError(fmt::format("hardy_z: imaginary part {:.3e} at t = {} breaks the functional equation", h.imag, t));
  }
  return h.z;
}

RectCount count_zeros_rectangle(const TwistedL& L, double sigma, double sigma_max, double t1, double t2,
                                const UnwrapOptions& options) {
  if (!(sigma_max > sigma) || !(t2 > t1)) throw ValidationError("count_zeros_rectangle: degenerate rectangle");
  FamilyFn f = l_family(L);
  const Rect base{sigma, sigma_max, t1, t2};
  for (int k = 0; k <= kMaxNudges; ++k) {
    Rect box = nudged(base, k);
    auto w = winding_numbers(f, box, options);
    if (!w.failed[0]) return {w.count[0], w.raw[0], box, k};
  }
  throw NumericError(fmt::format("count_zeros_rectangle: zero on the boundary of [{}, {}] x [{}, {}] for chi index {}",
                                 sigma, sigma_max, t1, t2, L.index()));
}

ZeroList find_zeros_on_line(const TwistedL& L, double t1, double t2, double step, const ZeroScanOptions& options) {
  if (!(t2 > t1)) throw ValidationError("find_zeros_on_line: empty window");
  if (!(step > 0.0)) throw ValidationError("find_zeros_on_line: step must be positive");
  ZeroList out;
  out.chi_index = L.index();
  out.rect_sigma = 0.5 - options.delta_prime;
  RectCount rc = count_zeros_rectangle(L, out.rect_sigma, options.sigma_max, t1, t2, options.unwrap);
  out.t1 = rc.box.t0;
  out.t2 = rc.box.t1;
  out.rect_count = rc.count;
  out.nudges = rc.nudges;

  Scan scan;
  double h = step;
  for (int round = 0; round <= options.audit_halvings; ++round) {
    scan = scan_line(L, out.t1, out.t2, h, options.bisect_tol);
    out.scan_step = h;
    if (static_cast<long>(scan.ordinates.size()) == rc.count) {
      out.ordinates = std::move(scan.ordinates);
      out.multiplicity.assign(out.ordinates.size(), 1);
      out.max_abs_z = scan.max_abs_z;
      out.audit_ok = true;
      return out;
    }
    h *= 0.5;
  }

  // Sign changes do not explain the count: locate everything in the box.
  const auto& Lref = L;
  ScalarFn f = [&Lref](cplx s) { return l_value(Lref, s); };
  auto located = locate_zeros(f, rc.box, options.bisect_tol, options.unwrap);
  long total = 0;
  std::sort(located.begin(), located.end(), [](const auto& a, const auto& b) { return a.z.imag() < b.z.imag(); });
  for (const auto& z : located) {
    total += z.multiplicity;
    if (std::abs(z.z.real() - 0.5) <= options.offline_tol + z.box_size) {
      out.ordinates.push_back(z.z.imag());
      out.multiplicity.push_back(z.multiplicity);
      out.max_abs_z = std::max(out.max_abs_z, std::abs(hardy_z(L, z.z.imag())));
    } else {
      out.offline.push_back(z.z);
    }
  }
  if (total != rc.count) {
    throw NumericError(fmt::format("find_zeros_on_line: unresolved window [{}, {}] for chi index {}: {} zeros by "
                                   "winding, {} located",
                                   out.t1, out.t2, L.index(), rc.count, total));
  }
  out.audit_ok = true;
  return out;
}

FamilyCounts count_zeros_family(const std::shared_ptr<const LKernel>& kernel, std::span<const std::uint64_t> js,
                                std::span<const double> sigmas, double sigma_max, double t1, double t2,
                                const UnwrapOptions& options) {
  if (sigmas.empty()) throw ValidationError("count_zeros_family: empty sigma grid");
  if (!std::is_sorted(sigmas.begin(), sigmas.end()) || !(sigmas.back() < sigma_max) || !(t2 > t1)) {
    throw ValidationError("count_zeros_family: sigma grid must increase and stay below sigma_max");
  }
  std::vector<std::uint64_t> idx(js.begin(), js.end());
  FamilyFn f = [&kernel, &idx](cplx s) { return kernel->evaluate(s, idx, Output::L); };
  std::vector<double> xs(sigmas.begin(), sigmas.end());
  xs.push_back(sigma_max);
  const std::size_t m = xs.size();
  const std::size_t nc = idx.size();

  FamilyCounts out;
  std::vector<std::vector<cplx>> lower(m);
  std::vector<std::vector<cplx>> upper(m);
  for (std::size_t i = 0; i < m; ++i) {
    lower[i] = f({xs[i], t1});
    upper[i] = f({xs[i], t2});
    out.evaluations += 2;
  }
  std::vector<PhaseTrack> bottom(m - 1);
  std::vector<PhaseTrack> top(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    bottom[i] = unwrap_segment(f, {xs[i], t1}, {xs[i + 1], t1}, lower[i], lower[i + 1], options);
    top[i] = unwrap_segment(f, {xs[i], t2}, {xs[i + 1], t2}, upper[i], upper[i + 1], options);
    out.evaluations += bottom[i].evaluations + top[i].evaluations;
  }
  PhaseTrack right = unwrap_segment(f, {sigma_max, t1}, {sigma_max, t2}, lower[m - 1], upper[m - 1], options);
  out.evaluations += right.evaluations;

  // Accumulate from the right so every rectangle reuses the pieces to its right.
  std::vector<double> acc = right.delta;
  std::vector<bool> bad = right.failed;
  out.counts.assign(m - 1, std::vector<RectCount>(nc));
  for (std::size_t i = m - 1; i-- > 0;) {
    for (std::size_t c = 0; c < nc; ++c) {
      acc[c] += bottom[i].delta[c] - top[i].delta[c];
      bad[c] = bad[c] || bottom[i].failed[c] || top[i].failed[c];
    }
    PhaseTrack left = unwrap_segment(f, {xs[i], t2}, {xs[i], t1}, upper[i], lower[i], options);
    out.evaluations += left.evaluations;
    for (std::size_t c = 0; c < nc; ++c) {
      double raw = (acc[c] + left.delta[c]) / (2.0 * kPi);
      double rounded = std::round(raw);
      if (bad[c] || left.failed[c] || std::abs(raw - rounded) > 0.05) {
        ++out.recounted;
        out.counts[i][c] = count_zeros_rectangle(TwistedL(kernel, idx[c]), xs[i], sigma_max, t1, t2, options);
      } else {
        out.counts[i][c] = {static_cast<long>(rounded), raw, Rect{xs[i], sigma_max, t1, t2}, 0};
      }
    }
  }
  return out;
}

DensityTable density_table(const std::shared_ptr<const LKernel>& kernel, std::span<const double> sigmas, double t1,
                           double t2, double sigma_max, const UnwrapOptions& options) {
  std::vector<std::uint64_t> js;
  for (const auto& chi : enumerate_primitive(kernel->table_ptr())) js.push_back(chi.index());
  if (js.empty()) throw DomainError("density_table: no primitive characters");
  std::vector<double> grid(sigmas.begin(), sigmas.end());
  std::sort(grid.begin(), grid.end());
  auto fc = count_zeros_family(kernel, js, grid, sigma_max, t1, t2, options);

  const double q = static_cast<double>(kernel->table().modulus());
  const double inv_log_q = 1.0 / std::log(q);
  DensityTable out{kernel->table().modulus(), t1, t2, {}, js.size(), 0, true, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    long total = 0;
    for (const auto& rc : fc.counts[i]) {
      total += rc.count;
      out.nudges += rc.nudges;
    }
    bool hyp = grid[i] >= 0.5 + inv_log_q && t2 - t1 >= inv_log_q;
    out.rows.push_back({grid[i], static_cast<double>(total) / static_cast<double>(js.size()), hyp, total});
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].n_avg > out.rows[i - 1].n_avg) out.monotone = false;
  }
  if (out.rows.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (const auto& r : out.rows) {
      mx += r.sigma - 0.5;
      my += r.n_avg;
    }
    mx /= static_cast<double>(out.rows.size());
    my /= static_cast<double>(out.rows.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& r : out.rows) {
      sxy += (r.sigma - 0.5 - mx) * (r.n_avg - my);
      sxx += (r.sigma - 0.5 - mx) * (r.sigma - 0.5 - mx);
    }
    out.fit_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return out;
}

double n_avg(const std::shared_ptr<const LKernel>& kernel, double sigma, double t1, double t2) {
  const double inv_log_q = 1.0 / std::log(static_cast<double>(kernel->table().modulus()));
  if (sigma < 0.5 + inv_log_q || t2 - t1 < inv_log_q) {
    throw DomainError(fmt::format("n_avg: need sigma >= {:.4f} and t2 - t1 >= {:.4f}", 0.5 + inv_log_q, inv_log_q));
  }
  double s[] = {sigma};
  return density_table(kernel, s, t1, t2).rows[0].n_avg;
}

namespace {

double log_abs_omega(const ScalarFn& deviation, cplx s) {
  cplx u = deviation(s);
  return 0.5 * std::log1p(2.0 * u.real() + std::norm(u));
}

struct PanelQuad {
  double value = 0.0;
  double error = 0.0;
  double worst_error = 0.0;
  double worst_a = 0.0;
  double worst_b = 0.0;
};

template <class F>
void integrate_panels(const F& f, double a, double b, double panel, double tol, unsigned depth, PanelQuad& q) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / panel)));
  for (std::size_t k = 0; k < n; ++k) {
    double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    double hi = k + 1 == n ? b : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(n);
    double err = 0.0;
    q.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, depth, tol, &err);
    q.error += err;
    if (err > q.worst_error) {
      q.worst_error = err;
      q.worst_a = lo;
      q.worst_b = hi;
    }
  }
}

}  // namespace

SelbergCheck selberg_identity_check(const ScalarFn& deviation, std::span<const cplx> zeros, double sigma_prime,
                                    double t1, double t2, const SelbergOptions& options) {
  if (!(t2 > t1)) throw ValidationError("selberg_identity_check: empty window");
  const double H = t2 - t1;
  SelbergCheck out;
  for (cplx z : zeros) {
    if (z.real() > sigma_prime && z.imag() > t1 && z.imag() < t2) {
      out.lhs += std::sin(kPi * (z.imag() - t1) / H) * std::sinh(kPi * (z.real() - sigma_prime) / H);
      ++out.zeros_used;
    }
  }
  out.lhs *= 2.0 * H;

  auto beta_integrand = [&](double beta) {
    return std::sinh(kPi * (beta - sigma_prime) / H) *
           (log_abs_omega(deviation, {beta, t1}) + log_abs_omega(deviation, {beta, t2}));
  };
  int quiet = 0;
  double beta = sigma_prime + 1.0;
  for (; beta <= sigma_prime + options.sigma_limit; beta += 1.0) {
    quiet = std::abs(beta_integrand(beta)) < options.truncate_below ? quiet + 1 : 0;
    if (quiet == 3) break;
  }
  if (quiet < 3) {
    throw DomainError("selberg_identity_check: omega does not approach 1 fast enough for the sinh weight");
  }
  out.sigma_far = beta;

  PanelQuad q;
  auto t_integrand = [&](double t) {
    return std::sin(kPi * (t - t1) / H) * log_abs_omega(deviation, {sigma_prime, t});
  };
  integrate_panels(t_integrand, t1, t2, options.panel, options.quad_tol, options.max_depth, q);
  integrate_panels(beta_integrand, sigma_prime, out.sigma_far, 1.0, options.quad_tol, options.max_depth, q);
  out.rhs = q.value;
  out.quad_error = q.error;
  if (q.worst_error > options.max_panel_error) {
    throw NumericError(fmt::format("selberg_identity_check: quadrature did not converge on panel [{}, {}] (error {:.3e})",
                                   q.worst_a, q.worst_b, q.worst_error));
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

std::vector<cplx> omega_zeros(const ScalarFn& deviation, double sigma_prime, double sigma_far, double t1, double t2) {
  ScalarFn omega = [&deviation](cplx s) { return 1.0 + deviation(s); };
  std::vector<cplx> out;
  for (const auto& z : locate_zeros(omega, Rect{sigma_prime, sigma_far, t1, t2}, 1e-11)) {
    for (long m = 0; m < z.multiplicity; ++m) out.push_back(z.z);
  }
  return out;
}

ScalarFn exponential_deviation(double a, double b) {
  const double lb = std::log(b);
  return [a, lb](cplx s) { return -a * std::exp(-s * lb); };
}

std::vector<cplx> exponential_omega_zeros(double a, double b, double t1, double t2) {
  if (!(a > 0.0) || !(b > 1.0)) throw DomainError("exponential omega needs a > 0, b > 1");
  const double lb = std::log(b);
  const double beta = std::log(a) / lb;
  const double period = 2.0 * kPi / lb;
  std::vector<cplx> out;
  for (auto k = static_cast<long>(std::floor(t1 / period)); k * period <= t2; ++k) {
    double g = static_cast<double>(k) * period;
    if (g > t1 && g < t2) out.emplace_back(beta, g);
  }
  return out;
}

bool exponential_growth_ok(double b, double t1, double t2) { return std::log(b) > kPi / (t2 - t1); }

}  // namespace twistarg
