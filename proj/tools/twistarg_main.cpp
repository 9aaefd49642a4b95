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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "twistarg/argument.hpp"
#include "twistarg/checks.hpp"
#include "twistarg/errors.hpp"
#include "twistarg/io.hpp"
#include "twistarg/mollifier.hpp"
#include "twistarg/moments.hpp"
#include "twistarg/zeros.hpp"

using namespace twistarg;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitResource = 3;

struct RunConfig {
  std::string form = "delta";
  std::size_t n_max = 0;  // 0: sized from the command's evaluation box
  std::vector<std::uint64_t> q;
  std::vector<std::uint64_t> j;
  std::vector<double> t;
  std::uint64_t x_cubed = 0;  // 0: max(64, sqrt q)
  std::vector<int> n{1, 2};
  double c = 0.002;
  std::optional<double> mollifier_length;
  double t1 = 0.0;
  double t2 = 10.0;
  std::vector<double> sigma;
  int bins = 40;
  std::size_t count = 30;
  std::string out = "out";
  std::string cache;
  unsigned workers = 1;
};

Json config_json(const std::string& command, const RunConfig& c) {
  Json j;
  j["command"] = command;
  j["form"] = c.form;
  j["n_max"] = c.n_max;
  j["q"] = c.q;
  j["j"] = c.j;
  j["t"] = c.t;
  j["x_cubed"] = c.x_cubed;
  j["n"] = c.n;
  j["c"] = c.c;
  j["mollifier_length"] = c.mollifier_length ? Json(*c.mollifier_length) : Json(nullptr);
  j["t1"] = c.t1;
  j["t2"] = c.t2;
  j["sigma"] = c.sigma;
  j["bins"] = c.bins;
  j["count"] = c.count;
  j["workers"] = c.workers;
  return j;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finding that makes the run fail without any exception, e.g. a violated invariant.
class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::string command;
  RunConfig cfg;
  Cache cache;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Context(std::string cmd, RunConfig c)
      : command(std::move(cmd)), cfg(std::move(c)), cache(cfg.cache.empty() ? fs::path(cfg.out) / "cache" : fs::path(cfg.cache)) {}

  Json envelope() const {
    Json j;
    j["format"] = "twistarg-report";
    j["version"] = 1;
    j["config"] = config_json(command, cfg);
    return j;
  }

  // Timing lives in its own block; everything else is reproducible byte for byte.
  void finish(Json& j) const {
    Json run;
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    run["timestamp"] = buf;
    run["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["run"] = run;
  }

  fs::path path(const std::string& name) const { return fs::path(cfg.out) / name; }

  void emit_json(const std::string& name, Json j) const {
    finish(j);
    write_atomic(path(name), dump_json(j));
    fmt::print("{}\n", path(name).string());
  }

  void emit_csv(const std::string& name, const std::string& text) const {
    write_atomic(path(name), text);
    fmt::print("{}\n", path(name).string());
  }
};

std::string tag(double v) { return fmt::format("{}", v); }

void require_q(const RunConfig& c) {
  if (c.q.empty()) throw UsageError("q: at least one modulus is required");
}

void require_t(const RunConfig& c, bool positive) {
  if (c.t.empty()) throw UsageError("t: at least one height is required");
  for (double t : c.t) {
    if (positive && !(t > 0.0)) throw UsageError(fmt::format("t: {} must be positive", t));
  }
}

void validate(const RunConfig& c) {
  for (auto q : c.q) {
    if (q < 3 || q % 2 == 0 || !is_prime_u64(q)) throw UsageError(fmt::format("q: {} is not an odd prime", q));
  }
  for (int n : c.n) {
    if (n < 1) throw UsageError(fmt::format("n: moment order {} must be at least 1", n));
  }
  if (!c.mollifier_length && !(c.c > 0.0 && c.c < 1.0 / 360.0)) {
    throw UsageError(fmt::format("c: {} is outside (0, 1/360); pass --mollifier-length to override", c.c));
  }
  if (c.mollifier_length && !(*c.mollifier_length >= 1.0)) throw UsageError("mollifier-length: must be at least 1");
  if (c.bins < 1) throw UsageError("bins: must be at least 1");
  if (c.workers < 1) throw UsageError("workers: must be at least 1");
  if (!(c.t2 > c.t1)) throw UsageError("t2: must exceed t1");
}

// Coefficients needed for evaluations in the given box at every listed modulus.
std::size_t table_size(const Context& ctx, double s_lo, double s_hi, double t_lo, double t_hi, std::size_t floor = 1000) {
  if (ctx.cfg.n_max > 0) return ctx.cfg.n_max;
  auto probe = std::make_shared<const HeckeForm>(ctx.cfg.form == "delta" ? HeckeForm::delta(16) : resolve_form(ctx.cfg.form, 16));
  std::size_t need = floor;
  for (auto q : ctx.cfg.q) {
    LKernel k(probe, CharacterTable::build(q));
    need = std::max(need, coefficients_needed(k, s_lo, s_hi, t_lo, t_hi));
  }
  need += need / 10;
  return (need + 999) / 1000 * 1000;
}

std::shared_ptr<const LKernel> make_kernel(Context& ctx, const std::shared_ptr<const HeckeForm>& form, std::uint64_t q) {
  if (std::gcd(q, static_cast<std::uint64_t>(form->level())) != 1) {
    throw UsageError(fmt::format("q: {} shares a factor with the level {}", q, form->level()));
  }
  return std::make_shared<const LKernel>(form, ctx.cache.characters(q));
}

std::vector<std::uint64_t> chosen_characters(const RunConfig& c, std::uint64_t q, std::vector<std::uint64_t> fallback) {
  if (c.j.empty()) return fallback;
  for (auto j : c.j) {
    if (j < 1 || j > q - 2) throw UsageError(fmt::format("j: {} is not a primitive character index mod {}", j, q));
  }
  return c.j;
}

Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

int cmd_coeffs(Context& ctx) {
  const auto& c = ctx.cfg;
  const std::size_t N = c.n_max > 0 ? c.n_max : std::max<std::size_t>(c.count, 1000);
  auto form = ctx.cache.form(c.form, N);
  const auto outcome = ctx.cache.last_outcome();
  const std::size_t shown = std::min<std::size_t>(c.count, form->n_max());
  std::string csv = "n,a_n,lambda_n,mu_f,C_f\n";
  for (std::size_t n = 1; n <= shown; ++n) {
    csv += fmt::format("{},{},{},{},{}\n", n, to_decimal(form->raw(n)), format_double(form->lambda(n)),
                       format_double(mu_f(*form, n)), format_double(cf_coefficient(*form, n)));
  }
  const std::size_t check_to = std::min<std::size_t>(form->n_max(), 100000);
  std::size_t deligne_bad = 0;
  for (std::size_t n = 1; n <= check_to; ++n) deligne_bad += deligne_bound_exact(*form, n) ? 0 : 1;
  const std::size_t conv_to = std::min<std::size_t>(form->n_max(), 10000);
  std::vector<double> mu(conv_to + 1);
  for (std::size_t n = 1; n <= conv_to; ++n) mu[n] = mu_f(*form, n);
  double conv = 0.0;
  for (std::size_t n = 1; n <= conv_to; ++n) {
    double acc = 0.0;
    for (std::size_t d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      acc += form->lambda(d) * mu[n / d];
      if (d * d != n) acc += form->lambda(n / d) * mu[d];
    }
    conv = std::max(conv, std::abs(acc - (n == 1 ? 1.0 : 0.0)));
  }
  Json j = ctx.envelope();
  j["form_id"] = form->id();
  j["weight"] = form->weight();
  j["level"] = form->level();
  j["n_max"] = form->n_max();
  j["cache"] = to_string(outcome);
  j["deligne_checked_to"] = check_to;
  j["deligne_violations"] = deligne_bad;
  j["convolution_checked_to"] = conv_to;
  j["convolution_max_error"] = conv;
  ctx.emit_csv("coeffs.csv", csv);
  ctx.emit_json("coeffs.json", j);
  if (deligne_bad > 0 || conv > 1e-12) throw CheckFailure("coefficient invariants violated");
  return kExitOk;
}

int cmd_chars(Context& ctx) {
  require_q(ctx.cfg);
  auto form = ctx.cache.form(ctx.cfg.form, table_size(ctx, 0.5, 0.5, 0.0, 0.0));
  Json j = ctx.envelope();
  bool ok = true;
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    const auto outcome = ctx.cache.last_outcome();
    std::string csv = "j,parity,real,gauss_re,gauss_im,root_number_re,root_number_im\n";
    for (const auto& chi : enumerate_primitive(k->table_ptr())) {
      const cplx g = gauss_sum(chi);
      const cplx e = k->eps(chi.index());
      csv += fmt::format("{},{},{},{},{},{},{}\n", chi.index(), chi.parity(), chi.is_real() ? 1 : 0, format_double(g.real()),
                         format_double(g.imag()), format_double(e.real()), format_double(e.imag()));
    }
    Json r;
    r["q"] = q;
    r["generator"] = k->table().generator();
    r["primitive_characters"] = q - 2;
    r["cache"] = to_string(outcome);
    r["orthogonality_max_error"] = character_orthogonality_error(k->table_ptr());
    r["gauss_unit_max_error"] = gauss_unit_error(k->table_ptr());
    ok = ok && r["orthogonality_max_error"].get<double>() <= 1e-9 && r["gauss_unit_max_error"].get<double>() <= 1e-10;
    j["moduli"].push_back(r);
    ctx.emit_csv(fmt::format("chars-q{}.csv", q), csv);
  }
  ctx.emit_json("chars.json", j);
  if (!ok) throw CheckFailure("character invariants violated");
  return kExitOk;
}

int cmd_eval(Context& ctx) {
  require_q(ctx.cfg);
  require_t(ctx.cfg, false);
  std::vector<double> sigmas = ctx.cfg.sigma.empty() ? std::vector<double>{0.5} : ctx.cfg.sigma;
  auto [slo, shi] = std::minmax_element(sigmas.begin(), sigmas.end());
  auto [tlo, thi] = std::minmax_element(ctx.cfg.t.begin(), ctx.cfg.t.end());
  auto form = ctx.cache.form(ctx.cfg.form, table_size(ctx, *slo, *shi, *tlo, *thi));
  Json j = ctx.envelope();
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    std::string csv = "j,sigma,t,L_re,L_im,Lambda_re,Lambda_im,Z\n";
    for (auto idx : chosen_characters(ctx.cfg, q, {1})) {
      TwistedL L(k, idx);
      for (double sg : sigmas) {
        for (double t : ctx.cfg.t) {
          const cplx s(sg, t);
          const cplx lam = completed_lambda(L, s);
          const cplx lv = l_value(L, s);
          Json row;
          row["q"] = q;
          row["j"] = idx;
          row["s"] = cplx_json(s);
          row["L"] = cplx_json(lv);
          row["Lambda"] = cplx_json(lam);
          std::string z;
          if (sg == 0.5) {
            const double zv = hardy_z(L, t);
            row["Z"] = zv;
            z = format_double(zv);
          }
          j["values"].push_back(row);
          csv += fmt::format("{},{},{},{},{},{},{},{}\n", idx, format_double(sg), format_double(t), format_double(lv.real()),
                             format_double(lv.imag()), format_double(lam.real()), format_double(lam.imag()), z);
        }
      }
    }
    ctx.emit_csv(fmt::format("eval-q{}.csv", q), csv);
  }
  ctx.emit_json("eval.json", j);
  return kExitOk;
}

// Records a failure for the diagnostics file, then rethrows.
template <class F>
auto with_diagnostics(Context& ctx, const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const NumericError& e) {
    write_atomic(ctx.path(fmt::format("diagnostics-{}.txt", ctx.command)), fmt::format("{}: {}\n", what, e.what()));
    throw;
  }
}

std::string samples_csv(const std::vector<CharacterSample>& samples, const std::vector<std::uint64_t>& only) {
  std::string csv = "j,t,S,M,R,nudged\n";
  for (const auto& s : samples) {
    if (!only.empty() && std::find(only.begin(), only.end(), s.j) == only.end()) continue;
    csv += fmt::format("{},{},{},{},{},{}\n", s.j, format_double(s.t), format_double(s.S), format_double(s.M),
                       format_double(s.R), s.nudged ? 1 : 0);
  }
  return csv;
}

SweepOptions sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.workers = c.workers;
  return o;
}

std::size_t sweep_table(const Context& ctx) {
  auto [tlo, thi] = std::minmax_element(ctx.cfg.t.begin(), ctx.cfg.t.end());
  std::size_t n = table_size(ctx, 0.5, 3.0, *tlo - 0.01, *thi + 0.01);
  if (ctx.cfg.n_max == 0) {
    for (auto q : ctx.cfg.q) n = std::max<std::size_t>(n, ctx.cfg.x_cubed ? ctx.cfg.x_cubed : default_x_cubed(q));
  }
  return n;
}

int cmd_sarg(Context& ctx) {
  require_q(ctx.cfg);
  require_t(ctx.cfg, false);
  for (double t : ctx.cfg.t) {
    if (t == 0.0) throw UsageError("t: S(t) needs t != 0");
  }
  auto form = ctx.cache.form(ctx.cfg.form, sweep_table(ctx));
  Json j = ctx.envelope();
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    const std::uint64_t x3 = ctx.cfg.x_cubed ? ctx.cfg.x_cubed : default_x_cubed(q);
    auto only = chosen_characters(ctx.cfg, q, {});
    for (double t : ctx.cfg.t) {
      auto sw = with_diagnostics(ctx, fmt::format("q = {}, t = {}", q, t), [&] { return sweep_s(*k, t, x3, sweep_options(ctx.cfg)); });
      Json r;
      r["q"] = q;
      r["t"] = t;
      r["x_cubed"] = x3;
      r["characters"] = sw.samples.size();
      r["nudged"] = sw.nudged;
      r["failed"] = 0;
      double s1 = 0.0, s2 = 0.0;
      for (const auto& s : sw.samples) {
        s1 += s.S;
        s2 += s.S * s.S;
      }
      r["mean_S"] = s1 / static_cast<double>(sw.samples.size());
      r["mean_S2"] = s2 / static_cast<double>(sw.samples.size());
      j["runs"].push_back(r);
      ctx.emit_csv(fmt::format("sarg-q{}-t{}.csv", q, tag(t)), samples_csv(sw.samples, only));
    }
  }
  ctx.emit_json("sarg.json", j);
  return kExitOk;
}

int cmd_zeros(Context& ctx) {
  require_q(ctx.cfg);
  const auto& c = ctx.cfg;
  auto form = ctx.cache.form(c.form, table_size(ctx, 0.4, 3.0, c.t1 - 0.1, c.t2 + 0.1));
  Json j = ctx.envelope();
  bool ok = true;
  for (auto q : c.q) {
    auto k = make_kernel(ctx, form, q);
    for (auto idx : chosen_characters(c, q, {1})) {
      TwistedL L(k, idx);
      auto z = with_diagnostics(ctx, fmt::format("q = {}, j = {}", q, idx), [&] { return find_zeros_on_line(L, c.t1, c.t2, 0.05); });
      Json r;
      r["q"] = q;
      r["j"] = idx;
      r["t1"] = z.t1;
      r["t2"] = z.t2;
      r["ordinates"] = z.ordinates;
      r["multiplicity"] = z.multiplicity;
      Json off = Json::array();
      for (auto w : z.offline) off.push_back(cplx_json(w));
      r["offline"] = off;
      r["rect_count"] = z.rect_count;
      r["rect_sigma"] = z.rect_sigma;
      r["scan_step"] = z.scan_step;
      r["max_abs_z"] = z.max_abs_z;
      r["nudges"] = z.nudges;
      r["audit_ok"] = z.audit_ok;
      ok = ok && z.audit_ok;
      j["zeros"].push_back(r);
      std::string csv = "gamma,multiplicity\n";
      for (std::size_t i = 0; i < z.ordinates.size(); ++i) {
        csv += fmt::format("{},{}\n", format_double(z.ordinates[i]), z.multiplicity[i]);
      }
      ctx.emit_csv(fmt::format("zeros-q{}-j{}.csv", q, idx), csv);
    }
  }
  ctx.emit_json("zeros.json", j);
  if (!ok) throw CheckFailure("zero audit failed");
  return kExitOk;
}

int cmd_density(Context& ctx) {
  require_q(ctx.cfg);
  const auto& c = ctx.cfg;
  std::vector<double> sigmas = c.sigma.empty() ? std::vector<double>{0.52, 0.6, 0.7, 0.8, 0.9} : c.sigma;
  const double lo = *std::min_element(sigmas.begin(), sigmas.end());
  auto form = ctx.cache.form(c.form, table_size(ctx, std::max(lo - 0.01, -4.0), 3.0, c.t1 - 0.1, c.t2 + 0.1));
  Json j = ctx.envelope();
  for (auto q : c.q) {
    auto k = make_kernel(ctx, form, q);
    auto d = with_diagnostics(ctx, fmt::format("q = {}", q), [&] { return density_table(k, sigmas, c.t1, c.t2); });
    Json r;
    r["q"] = q;
    r["t1"] = d.t1;
    r["t2"] = d.t2;
    r["characters"] = d.characters;
    r["nudges"] = d.nudges;
    r["monotone"] = d.monotone;
    r["fit_slope"] = d.fit_slope;
    std::string csv = "sigma,n_avg,total,in_hypothesis_range\n";
    for (const auto& row : d.rows) {
      Json x;
      x["sigma"] = row.sigma;
      x["n_avg"] = row.n_avg;
      x["total"] = row.total;
      x["in_hypothesis_range"] = row.in_hypothesis_range;
      r["rows"].push_back(x);
      csv += fmt::format("{},{},{},{}\n", format_double(row.sigma), format_double(row.n_avg), row.total,
                         row.in_hypothesis_range ? 1 : 0);
    }
    j["tables"].push_back(r);
    ctx.emit_csv(fmt::format("density-q{}.csv", q), csv);
  }
  ctx.emit_json("density.json", j);
  return kExitOk;
}

int cmd_mollifier(Context& ctx) {
  require_q(ctx.cfg);
  const auto& c = ctx.cfg;
  std::vector<double> ts = c.t.empty() ? std::vector<double>{1.0} : c.t;
  std::vector<double> sigmas = c.sigma.empty() ? std::vector<double>{0.6} : c.sigma;
  auto [slo, shi] = std::minmax_element(sigmas.begin(), sigmas.end());
  auto [tlo, thi] = std::minmax_element(ts.begin(), ts.end());
  std::size_t N = table_size(ctx, *slo, std::max(*shi, 1.5), *tlo, *thi);
  if (c.n_max == 0) {
    for (auto q : c.q) {
      N = std::max<std::size_t>(N, static_cast<std::size_t>(c.mollifier_length ? *c.mollifier_length : std::pow(q, c.c)));
    }
  }
  auto form = ctx.cache.form(c.form, N);
  Json j = ctx.envelope();
  for (auto q : c.q) {
    auto k = make_kernel(ctx, form, q);
    auto spec = MollifierSpec::build(*form, q, c.c, c.mollifier_length);
    auto bare = MollifierSpec::build(*form, q, c.c, 1.0);
    for (double sg : sigmas) {
      for (double t : ts) {
        auto avg = lm_deviation_average(spec, k, sg, t);
        auto ref = lm_deviation_average(bare, k, sg, t);
        Json r;
        r["q"] = q;
        r["sigma"] = sg;
        r["t"] = t;
        r["length"] = spec.length;
        r["q_to_c"] = std::pow(static_cast<double>(q), c.c);
        r["overridden"] = spec.overridden;
        r["average"] = avg.average;
        r["average_without_mollifier"] = ref.average;
        r["characters"] = avg.count;
        if (sg > 1.0) r["majorant"] = lm_deviation_majorant(spec, *form, sg, std::min<std::size_t>(20000, form->n_max()));
        j["averages"].push_back(r);
      }
    }
  }
  ctx.emit_json("mollifier.json", j);
  return kExitOk;
}

Json moment_json(const MomentReport& rep) {
  Json r;
  r["q"] = rep.q;
  r["t"] = rep.t;
  r["x_cubed"] = rep.x3;
  r["n_list"] = rep.n_list;
  r["characters"] = rep.characters;
  r["nudged"] = rep.nudged;
  r["failed"] = 0;
  r["loglog_q"] = rep.loglog_q;
  r["prime_sum"] = rep.prime_sum;
  for (const auto& row : rep.rows) {
    Json x;
    x["n"] = row.n;
    x["s_moment"] = row.s_moment;
    x["m_moment"] = row.m_moment;
    x["r_moment"] = row.r_moment;
    x["m_odd_moment"] = row.m_odd;
    x["s_odd_moment"] = row.s_odd;
    x["constant"] = row.constant;
    x["prediction_loglog"] = row.prediction_loglog;
    x["prediction_prime_sum"] = row.prediction_prime_sum;
    x["holder_lhs"] = row.holder_lhs;
    x["holder_rhs"] = row.holder_rhs;
    x["holder_ok"] = row.holder_ok;
    r["moments"].push_back(x);
  }
  return r;
}

int cmd_moments(Context& ctx) {
  require_q(ctx.cfg);
  require_t(ctx.cfg, true);
  if (ctx.cfg.n.empty()) throw UsageError("n: at least one moment order is required");
  auto form = ctx.cache.form(ctx.cfg.form, sweep_table(ctx));
  bool ok = true;
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    const std::uint64_t x3 = ctx.cfg.x_cubed ? ctx.cfg.x_cubed : default_x_cubed(q);
    for (double t : ctx.cfg.t) {
      auto rep = with_diagnostics(ctx, fmt::format("q = {}, t = {}", q, t),
                                  [&] { return sweep_moments(*k, t, x3, ctx.cfg.n, sweep_options(ctx.cfg)); });
      Json j = ctx.envelope();
      j["report"] = moment_json(rep);
      auto a = assemble_m2(*k, x3, t);
      Json as;
      as["diagonal"] = a.diagonal;
      as["off_diagonal"] = a.off_diagonal;
      as["principal"] = a.principal;
      as["assembled_average"] = a.average;
      as["prediction"] = a.prediction;
      double m2 = 0.0;
      for (const auto& s : rep.samples) m2 += s.M * s.M;
      m2 /= static_cast<double>(rep.samples.size());
      as["sweep_average"] = m2;
      as["difference"] = m2 - a.average;
      j["second_moment_assembly"] = as;
      ok = ok && std::abs(m2 - a.average) <= 1e-9;
      for (const auto& row : rep.rows) ok = ok && row.holder_ok;
      Json oracle = Json::array();
      for (int n : ctx.cfg.n) {
        try {
          auto o = diagonal_oracle(*k, x3, t, n);
          Json x;
          x["n"] = n;
          x["direct"] = o.direct;
          x["orthogonal"] = o.orthogonal;
          x["difference"] = o.difference;
          x["principal"] = o.principal;
          x["primitive"] = o.primitive;
          x["closed_form"] = o.closed_form;
          x["tuples"] = o.tuples;
          oracle.push_back(x);
          ok = ok && std::abs(o.difference) <= 1e-9 * std::max(1.0, o.direct);
        } catch (const ResourceError& e) {
          spdlog::info("oracle skipped for n = {}: {}", n, e.what());
        }
      }
      j["oracle"] = oracle;
      ctx.emit_json(fmt::format("moments-q{}-t{}.json", q, tag(t)), j);
      ctx.emit_csv(fmt::format("moments-q{}-t{}.csv", q, tag(t)), samples_csv(rep.samples, {}));
    }
  }
  if (!ok) throw CheckFailure("moment identities violated");
  return kExitOk;
}

int cmd_clt(Context& ctx) {
  require_q(ctx.cfg);
  require_t(ctx.cfg, true);
  auto form = ctx.cache.form(ctx.cfg.form, sweep_table(ctx));
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    for (double t : ctx.cfg.t) {
      auto r = with_diagnostics(ctx, fmt::format("q = {}, t = {}", q, t),
                                [&] { return clt_distribution(*k, t, ctx.cfg.bins, sweep_options(ctx.cfg)); });
      std::string csv = "bin_left,bin_right,mass,gaussian_mass\n";
      double total = 0.0;
      for (const auto& b : r.histogram) {
        csv += fmt::format("{},{},{},{}\n", format_double(b.left), format_double(b.right), format_double(b.mass),
                           format_double(b.gaussian_mass));
        total += b.mass;
      }
      Json j = ctx.envelope();
      j["q"] = q;
      j["t"] = t;
      j["scale"] = r.scale;
      j["variance_target"] = moment_constant(1);
      j["characters"] = r.characters;
      j["nudged"] = r.nudged;
      j["ks_distance"] = r.ks_distance;
      j["mass_total"] = total;
      ctx.emit_csv(fmt::format("clt-q{}-t{}.csv", q, tag(t)), csv);
      ctx.emit_json(fmt::format("clt-q{}-t{}.json", q, tag(t)), j);
      fmt::print("q = {} t = {} ks_distance = {}\n", q, t, format_double(r.ks_distance));
    }
  }
  return kExitOk;
}

int cmd_check(Context& ctx) {
  require_q(ctx.cfg);
  auto form = ctx.cache.form(ctx.cfg.form, table_size(ctx, -0.5, 3.0, -20.0, 20.0));
  Json j = ctx.envelope();
  bool ok = true;
  for (auto q : ctx.cfg.q) {
    auto k = make_kernel(ctx, form, q);
    for (const auto& r : check_suite(k, 1)) {
      Json x;
      x["q"] = q;
      x["name"] = r.name;
      x["value"] = r.value;
      x["threshold"] = r.threshold;
      x["passed"] = r.passed;
      x["detail"] = r.detail;
      j["checks"].push_back(x);
      ok = ok && r.passed;
      fmt::print("{} q={} {:<34} {:.3g} (<= {:.3g})\n", r.passed ? "PASS" : "FAIL", q, r.name, r.value,
                 r.threshold);
    }
  }
  j["passed"] = ok;
  ctx.emit_json("check.json", j);
  if (!ok) throw CheckFailure("invariant suite failed");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("twistarg"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Twisted modular L-functions: values, zeros, arguments and character moments"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

  RunConfig cfg;
  app.add_option("--form", cfg.form, "\"delta\" or a form file")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "coefficient table size (0: sized automatically)");
  app.add_option("--q", cfg.q, "prime moduli")->delimiter(',');
  app.add_option("--j", cfg.j, "character indices")->delimiter(',');
  app.add_option("--t", cfg.t, "heights")->delimiter(',');
  app.add_option("--x-cubed", cfg.x_cubed, "prime-sum cutoff x^3 (0: max(64, sqrt q))");
  app.add_option("--n", cfg.n, "moment orders")->delimiter(',')->capture_default_str();
  app.add_option("--c", cfg.c, "mollifier exponent, L = q^c")->capture_default_str();
  app.add_option("--mollifier-length", cfg.mollifier_length, "explicit mollifier length L");
  app.add_option("--t1", cfg.t1, "window start")->capture_default_str();
  app.add_option("--t2", cfg.t2, "window end")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "real parts")->delimiter(',');
  app.add_option("--bins", cfg.bins, "histogram bins")->capture_default_str();
  app.add_option("--count", cfg.count, "coefficients listed by coeffs")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--cache", cfg.cache, "cache directory (default <out>/cache)");
  app.add_option("--workers", cfg.workers, "worker threads")->capture_default_str();

  using Handler = int (*)(Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"coeffs", "coefficient table and its invariants", cmd_coeffs},
      {"chars", "characters, Gauss sums and root numbers", cmd_chars},
      {"eval", "L, Lambda and Z at sigma + it", cmd_eval},
      {"sarg", "S, M and R over all primitive characters", cmd_sarg},
      {"zeros", "critical-line zeros with rectangle audit", cmd_zeros},
      {"density", "averaged zero counts right of sigma", cmd_density},
      {"mollifier", "averaged |L M - 1|^2", cmd_mollifier},
      {"moments", "character moments of S, M and R", cmd_moments},
      {"clt", "distribution of S / sqrt(log log q) against the Gaussian", cmd_clt},
      {"check", "invariant suite", cmd_check},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& [name, help, fn] : commands) {
    if (!app.got_subcommand(name)) continue;
    try {
      validate(cfg);
      Context ctx(name, cfg);
      return fn(ctx);
    } catch (const UsageError& e) {
      spdlog::error("{}", e.what());
      return kExitUsage;
    } catch (const ValidationError& e) {
      spdlog::error("invalid input: {}", e.what());
      return kExitUsage;
    } catch (const DomainError& e) {
      spdlog::error("domain error: {}", e.what());
      return kExitUsage;
    } catch (const ResourceError& e) {
      spdlog::error("resource limit: {}", e.what());
      return kExitResource;
    } catch (const NumericError& e) {
      spdlog::error("numeric failure: {}", e.what());
      return kExitNumeric;
    } catch (const CheckFailure& e) {
      spdlog::error("{}", e.what());
      return kExitNumeric;
    } catch (const std::exception& e) {
      spdlog::error("{}", e.what());
      return kExitNumeric;
    }
  }
  return kExitUsage;
}
