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

#include "twistarg/forms.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "twistarg/checksum.hpp"
#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

using boost::multiprecision::cpp_int;

cpp_int to_big(i128 v) {
  return cpp_int(to_decimal(v));
}

// n^{(k-1)/2} for even k, as n^{k/2-1} * sqrt(n) in extended precision.
long double weight_scale(std::uint64_t n, int weight) {
  long double p = 1.0L;
  for (int i = 0; i < weight / 2 - 1; ++i) p *= static_cast<long double>(n);
  return p * std::sqrt(static_cast<long double>(n));
}

i128 checked_mul(i128 a, i128 b) {
  i128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError("coefficient exceeds 128-bit range");
  return out;
}

i128 checked_sub(i128 a, i128 b) {
  i128 out;
  if (__builtin_sub_overflow(a, b, &out)) throw ResourceError("coefficient exceeds 128-bit range");
  return out;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  return std::gcd(a, b);
}

std::vector<std::pair<std::uint64_t, int>> factor_any(const HeckeForm& form, std::uint64_t n) {
  if (n <= form.sieve().limit()) return form.sieve().factorize(n);
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p : distinct_prime_factors(n)) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

}  // namespace

std::vector<i128> generate_delta_coefficients(std::size_t n_max) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  if (n_max > kMaxCoefficients) {
    throw ResourceError("coefficient table of " + std::to_string(n_max) + " entries exceeds cap " +
                        std::to_string(kMaxCoefficients));
  }
  // prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}; tau(n) is the
  // coefficient of q^{n-1} in its 8th power.
  const std::size_t deg = n_max - 1;
  std::vector<std::pair<std::size_t, int>> cube;
  for (std::size_t k = 0;; ++k) {
    std::size_t e = k * (k + 1) / 2;
    if (e > deg) break;
    cube.emplace_back(e, (k % 2 == 0 ? 1 : -1) * static_cast<int>(2 * k + 1));
  }
  std::vector<i128> acc(deg + 1, 0);
  for (auto [e, c] : cube) acc[e] = c;
  std::vector<i128> next(deg + 1);
  for (int round = 1; round < 8; ++round) {
    std::fill(next.begin(), next.end(), 0);
    for (auto [e, c] : cube) {
      for (std::size_t i = 0; i + e <= deg; ++i) next[i + e] += acc[i] * c;
    }
    acc.swap(next);
  }
  std::vector<i128> tau(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) tau[n] = acc[n - 1];
  return tau;
}

HeckeForm::HeckeForm(int weight, int level, std::vector<i128> raw, int root_number, FormSource source)
    : weight_(weight), level_(level), root_number_(root_number), raw_(std::move(raw)), source_(std::move(source)) {
  if (weight_ <= 0 || weight_ % 2 != 0) throw ValidationError("weight must be an even positive integer");
  if (level_ <= 0) throw ValidationError("level must be a positive integer");
  if (root_number_ != 1 && root_number_ != -1) throw ValidationError("root_number must be +1 or -1");
  if (raw_.size() < 2) throw ValidationError("coefficient table is empty");
  if (raw_[1] != 1) throw ValidationError("a(1) must equal 1");
  raw_[0] = 0;
  sieve_ = std::make_shared<Sieve>(raw_.size() - 1);
  for (std::uint64_t p : sieve_->primes()) {
    if (!deligne_bound_exact(*this, p)) {
      throw ValidationError("a(" + std::to_string(p) + ") = " + to_decimal(raw_[p]) + " violates the Deligne bound");
    }
  }
  lambda_.assign(raw_.size(), 0.0);
  for (std::size_t n = 1; n < raw_.size(); ++n) {
    lambda_[n] = static_cast<double>(static_cast<long double>(raw_[n]) / weight_scale(n, weight_));
  }
}

HeckeForm HeckeForm::delta(std::size_t n_max) {
  return HeckeForm(12, 1, generate_delta_coefficients(n_max), 1, FormSource{"delta", "", ""});
}

int HeckeForm::chi_r(std::uint64_t n) const {
  return gcd_u64(n, static_cast<std::uint64_t>(level_)) == 1 ? 1 : 0;
}

i128 HeckeForm::raw(std::uint64_t n) const {
  if (n == 0 || n >= raw_.size()) throw DomainError("coefficient index " + std::to_string(n) + " out of table range");
  return raw_[n];
}

double HeckeForm::lambda(std::uint64_t n) const {
  if (n == 0 || n >= lambda_.size()) throw DomainError("coefficient index " + std::to_string(n) + " out of table range");
  return lambda_[n];
}

std::string HeckeForm::id() const {
  std::string out = source_.name + "-k" + std::to_string(weight_) + "-r" + std::to_string(level_);
  if (!source_.checksum.empty()) out += "-" + source_.checksum.substr(0, 16);
  return out;
}

bool deligne_bound_exact(const HeckeForm& form, std::uint64_t n) {
  cpp_int a = to_big(form.raw(n));
  cpp_int d = form.sieve().divisor_count(n);
  cpp_int rhs = d * d * boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(form.weight() - 1));
  return a * a <= rhs;
}

HeckeForm parse_form(std::string_view json_text, FormSource source, std::optional<std::size_t> n_max) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("form file is not valid JSON: ") + e.what());
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key)) throw ValidationError(std::string("form file missing field '") + key + "'");
    return doc.at(key);
  };
  const auto& jw = require("weight");
  const auto& jl = require("level");
  if (!jw.is_number_integer()) throw ValidationError("field 'weight' must be an integer");
  if (!jl.is_number_integer()) throw ValidationError("field 'level' must be an integer");
  int weight = jw.get<int>();
  int level = jl.get<int>();
  const auto& neb = require("nebentypus");
  if (!neb.is_string() || neb.get<std::string>() != "trivial") {
    throw ValidationError("field 'nebentypus': only \"trivial\" is supported, got " + neb.dump());
  }
  const auto& norm = require("normalization");
  if (!norm.is_string() || norm.get<std::string>() != "arithmetic") {
    throw ValidationError("field 'normalization': expected \"arithmetic\", got " + norm.dump());
  }
  int root_number = 0;
  if (doc.contains("root_number")) {
    const auto& jr = doc.at("root_number");
    if (!jr.is_number_integer()) throw ValidationError("field 'root_number' must be +1 or -1");
    root_number = jr.get<int>();
  } else if (level == 1) {
    root_number = (weight / 2) % 2 == 0 ? 1 : -1;
  } else {
    throw ValidationError("field 'root_number' is required for level > 1");
  }

  const auto& ap = require("ap");
  if (!ap.is_array()) throw ValidationError("field 'ap' must be an array of [p, a_p] pairs");
  std::map<std::uint64_t, i128> listed;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    const auto& entry = ap[i];
    std::string where = "ap[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned()) {
      throw ValidationError(where + ": expected [p, a_p] with p a positive integer");
    }
    auto p = entry[0].get<std::uint64_t>();
    if (!is_prime_u64(p)) throw ValidationError(where + ": " + std::to_string(p) + " is not prime");
    i128 a = 0;
    if (entry[1].is_number_integer()) {
      a = entry[1].get<std::int64_t>();
    } else if (entry[1].is_string()) {
      a = parse_decimal(entry[1].get<std::string>());
    } else {
      throw ValidationError(where + ": a_p must be an integer or a decimal string");
    }
    if (!listed.emplace(p, a).second) throw ValidationError(where + ": prime " + std::to_string(p) + " listed twice");
  }
  if (listed.empty()) throw ValidationError("field 'ap' lists no primes");
  std::size_t limit = n_max.value_or(listed.rbegin()->first);
  if (limit < 1) throw ValidationError("n_max must be at least 1");
  if (limit > kMaxCoefficients) throw ResourceError("requested n_max exceeds coefficient cap");

  Sieve sieve(limit);
  for (std::uint64_t p : sieve.primes()) {
    if (!listed.contains(p)) throw ValidationError("ap: missing a(p) for p = " + std::to_string(p));
  }
  if (weight <= 0 || weight % 2 != 0) throw ValidationError("field 'weight' must be an even positive integer");
  if (level <= 0) throw ValidationError("field 'level' must be a positive integer");

  // Integer Hecke extension: a(p^{m+1}) = a(p) a(p^m) - chi_r(p) p^{k-1} a(p^{m-1}).
  std::vector<i128> raw(limit + 1, 0);
  raw[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    std::uint64_t p = sieve.smallest_factor(n);
    std::uint64_t pm = p;
    int m = 1;
    while ((n / pm) % p == 0) {
      pm *= p;
      ++m;
    }
    std::uint64_t rest = n / pm;
    if (rest > 1) {
      raw[n] = checked_mul(raw[pm], raw[rest]);
      continue;
    }
    i128 ap_val = listed.at(p);
    if (m == 1) {
      raw[n] = ap_val;
    } else if (level % static_cast<std::int64_t>(p) == 0) {
      raw[n] = checked_mul(ap_val, raw[n / p]);
    } else {
      i128 pk = 1;
      for (int i = 0; i < weight - 1; ++i) pk = checked_mul(pk, static_cast<i128>(p));
      raw[n] = checked_sub(checked_mul(ap_val, raw[n / p]), checked_mul(pk, raw[n / p / p]));
    }
  }
  // Prime-level sanity beyond the table: catch Deligne violations at listed primes past n_max too.
  for (auto [p, a] : listed) {
    cpp_int lhs = to_big(a) * to_big(a);
    cpp_int rhs = 4 * boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(weight - 1));
    if (lhs > rhs) {
      throw ValidationError("ap: a(" + std::to_string(p) + ") = " + to_decimal(a) + " violates the Deligne bound");
    }
  }
  return HeckeForm(weight, level, std::move(raw), root_number, std::move(source));
}

HeckeForm load_form(const std::filesystem::path& path, std::optional<std::size_t> n_max) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open form file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  FormSource source{path.stem().string(), path.string(), sha256_hex(text)};
  return parse_form(text, std::move(source), n_max);
}

HeckeForm resolve_form(const std::string& descriptor, std::size_t n_max) {
  if (descriptor == "delta") return HeckeForm::delta(n_max);
  return load_form(descriptor, n_max);
}

double hecke_extend(const HeckeForm& form, std::uint64_t n) {
  if (n == 0) throw DomainError("hecke_extend: n must be positive");
  double out = 1.0;
  for (auto [p, m] : factor_any(form, n)) {
    if (p > form.n_max()) throw ValidationError("hecke_extend: missing prime data for p = " + std::to_string(p));
    double lp = form.lambda(p);
    double chi = form.chi_r(p);
    if (chi == 0) {
      out *= std::pow(lp, m);
      continue;
    }
    double prev = 1.0;
    double cur = lp;
    for (int i = 1; i < m; ++i) {
      double nxt = lp * cur - chi * prev;
      prev = cur;
      cur = nxt;
    }
    out *= cur;
  }
  return out;
}

double mu_f(const HeckeForm& form, std::uint64_t n) {
  if (n == 0 || n > form.n_max()) throw DomainError("mu_f: index out of table range");
  double out = 1.0;
  for (auto [p, m] : form.sieve().factorize(n)) {
    if (m == 1) {
      out *= -form.lambda(p);
    } else if (m == 2) {
      out *= form.chi_r(p);
    } else {
      return 0.0;
    }
  }
  return out;
}

double cf_coefficient(const HeckeForm& form, std::uint64_t n) {
  if (n == 0 || n > form.n_max()) throw DomainError("cf_coefficient: index out of table range");
  auto pp = form.sieve().prime_power(n);
  if (!pp) return 0.0;
  double lp = form.lambda(pp->p);
  double chi = form.chi_r(pp->p);
  double s0 = 2.0;
  double s1 = lp;
  for (int i = 1; i < pp->m; ++i) {
    double s2 = lp * s1 - chi * s0;
    s0 = s1;
    s1 = s2;
  }
  return s1;
}

ArithmeticFunctionTable build_arithmetic_table(const HeckeForm& form, ArithmeticKind kind, std::size_t n_max) {
  if (n_max > form.n_max()) throw ResourceError("arithmetic table larger than coefficient table");
  ArithmeticFunctionTable table{kind, std::vector<double>(n_max + 1, 0.0)};
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    switch (kind) {
      case ArithmeticKind::MuF:
        table.values[n] = mu_f(form, n);
        break;
      case ArithmeticKind::CF:
        table.values[n] = cf_coefficient(form, n);
        break;
      case ArithmeticKind::VonMangoldt:
        table.values[n] = n >= 2 ? form.sieve().von_mangoldt(n) : 0.0;
        break;
    }
  }
  return table;
}

}  // namespace twistarg
