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

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

// Dirichlet characters modulo an odd prime, indexed through one primitive root.

namespace twistarg {

using cplx = std::complex<double>;

class CharacterTable {
 public:
  /// Throws ValidationError unless q is an odd prime.
  static std::shared_ptr<const CharacterTable> build(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::uint64_t generator() const { return g_; }
  std::uint64_t order() const { return q_ - 1; }
  /// ind(a) with g^ind(a) = a mod q; a must be coprime to q.
  std::uint32_t dlog(std::uint64_t a) const;
  /// g^k mod q.
  std::uint64_t power(std::uint64_t k) const { return pow_[k % (q_ - 1)]; }
  /// e(k / (q - 1)).
  const cplx& root(std::uint64_t k) const { return roots_[k % (q_ - 1)]; }
  const std::vector<cplx>& roots() const { return roots_; }
  /// e(a / q).
  const cplx& additive(std::uint64_t a) const { return additive_[a % q_]; }

 private:
  explicit CharacterTable(std::uint64_t q);

  std::uint64_t q_;
  std::uint64_t g_ = 0;
  std::vector<std::uint32_t> dlog_;
  std::vector<std::uint64_t> pow_;
  std::vector<cplx> roots_;
  std::vector<cplx> additive_;
};

/// chi_j(a) = e(j ind(a) / (q - 1)).
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterTable> table, std::uint64_t index);

  const CharacterTable& table() const { return *table_; }
  const std::shared_ptr<const CharacterTable>& table_ptr() const { return table_; }
  std::uint64_t modulus() const { return table_->modulus(); }
  std::uint64_t index() const { return j_; }
  bool primitive() const { return j_ != 0; }
  bool is_real() const { return (2 * j_) % table_->order() == 0; }
  /// chi(-1) = (-1)^j.
  int parity() const { return j_ % 2 == 0 ? 1 : -1; }
  DirichletCharacter conj() const;

  cplx value(std::int64_t a) const;
  /// value() for a residue already reduced to [0, q).
  const cplx& value_reduced(std::uint64_t r) const;

 private:
  std::shared_ptr<const CharacterTable> table_;
  std::uint64_t j_;
};

/// Smallest primitive root modulo the prime q.
std::uint64_t smallest_primitive_root(std::uint64_t q);

/// Normalized Gauss sum q^{-1/2} sum_a chi(a) e(a/q). DomainError for the principal character.
cplx gauss_sum(const DirichletCharacter& chi);

/// The q - 2 primitive characters j = 1..q-2 in index order.
std::vector<DirichletCharacter> enumerate_primitive(const std::shared_ptr<const CharacterTable>& table);

/// sum_i w_i chi_j(n_i) for every j in js, through residue buckets by discrete log.
std::vector<cplx> twisted_sums(const CharacterTable& table, std::span<const std::uint64_t> ns,
                               std::span<const cplx> ws, std::span<const std::uint64_t> js);

}  // namespace twistarg
