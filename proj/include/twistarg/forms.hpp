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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistarg/arith.hpp"

// Hecke eigenform data: integer Fourier coefficients a(n), normalized
// eigenvalues lambda(n) = a(n) / n^{(k-1)/2}, and the arithmetic functions
// derived from the local Euler factors 1 - lambda(p) X + chi_r(p) X^2.

namespace twistarg {

/// Largest coefficient table we build. Beyond this the 128-bit tau values
/// would no longer be provably in range.
inline constexpr std::size_t kMaxCoefficients = 2'000'000;

struct FormSource {
  std::string name;      ///< "delta" or the file stem
  std::string path;      ///< empty for built-ins
  std::string checksum;  ///< SHA-256 of the file contents, empty for built-ins
};

class HeckeForm {
 public:
  /// `raw` is indexed from 1 (raw[0] is ignored); validated on construction.
  HeckeForm(int weight, int level, std::vector<i128> raw, int root_number, FormSource source);

  /// Ramanujan's Delta (weight 12, level 1) with coefficients up to n_max.
  static HeckeForm delta(std::size_t n_max);

  int weight() const { return weight_; }
  int level() const { return level_; }
  std::size_t n_max() const { return lambda_.size() - 1; }
  /// Gamma shift (k - 1) / 2.
  double kappa() const { return 0.5 * (weight_ - 1); }
  /// Root number of L(s, f); +1 or -1 for real coefficients.
  int root_number() const { return root_number_; }
  /// Trivial character modulo the level.
  int chi_r(std::uint64_t n) const;

  i128 raw(std::uint64_t n) const;
  double lambda(std::uint64_t n) const;
  /// lambda(0..n_max); entry 0 is 0.
  std::span<const double> lambdas() const { return lambda_; }
  const Sieve& sieve() const { return *sieve_; }
  const FormSource& source() const { return source_; }
  /// Stable identifier used as cache key.
  std::string id() const;

 private:
  int weight_;
  int level_;
  int root_number_;
  std::vector<i128> raw_;
  std::vector<double> lambda_;
  std::shared_ptr<const Sieve> sieve_;
  FormSource source_;
};

/// Ramanujan tau(1..n_max) from q * prod (1 - q^n)^24. Index 0 holds 0.
std::vector<i128> generate_delta_coefficients(std::size_t n_max);

/// Parses the JSON form-file format. `n_max` defaults to the largest listed prime.
HeckeForm parse_form(std::string_view json_text, FormSource source, std::optional<std::size_t> n_max = {});
HeckeForm load_form(const std::filesystem::path& path, std::optional<std::size_t> n_max = {});

/// Form from a descriptor: "delta" or a path to a form file.
HeckeForm resolve_form(const std::string& descriptor, std::size_t n_max);

/// lambda(n) from the prime eigenvalues alone, through multiplicativity and
/// the Hecke recursion. Independent of the stored table for composite n.
double hecke_extend(const HeckeForm& form, std::uint64_t n);

/// Dirichlet inverse of lambda.
double mu_f(const HeckeForm& form, std::uint64_t n);

/// Coefficient of -L'/L at prime powers: alpha^m + beta^m for n = p^m, else 0.
double cf_coefficient(const HeckeForm& form, std::uint64_t n);

enum class ArithmeticKind { MuF, CF, VonMangoldt };

struct ArithmeticFunctionTable {
  ArithmeticKind kind;
  std::vector<double> values;  ///< indexed 0..n_max, entry 0 unused
};

ArithmeticFunctionTable build_arithmetic_table(const HeckeForm& form, ArithmeticKind kind, std::size_t n_max);

/// Exact |a(n)| <= d(n) n^{(k-1)/2}, checked as a(n)^2 <= d(n)^2 n^{k-1} in big integers.
bool deligne_bound_exact(const HeckeForm& form, std::uint64_t n);

}  // namespace twistarg
