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


#include "twistarg/characters.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "twistarg/arith.hpp"
#include "twistarg/errors.hpp"

namespace twistarg {

namespace {

// e(k/n).
cplx unit_root(std::uint64_t k, std::uint64_t n) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::uint64_t smallest_primitive_root(std::uint64_t q) {
  if (q == 2) return 1;
  auto factors = distinct_prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = true;
    for (std::uint64_t p : factors) {
      if (powmod(g, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw ValidationError("no primitive root modulo " + std::to_string(q));
}

CharacterTable::CharacterTable(std::uint64_t q) : q_(q) {
  if (q < 3 || q % 2 == 0 || !is_prime_u64(q)) {
    throw ValidationError("modulus " + std::to_string(q) + " is not an odd prime");
  }
  if (q > (1ULL << 31U)) throw ResourceError("modulus too large for a full discrete-log table");
  g_ = smallest_primitive_root(q);
  const std::uint64_t n = q - 1;
  dlog_.assign(q, 0);
  pow_.resize(n);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    pow_[k] = x;
    dlog_[x] = static_cast<std::uint32_t>(k);
    x = x * g_ % q;
  }
  roots_.resize(n);
  for (std::uint64_t k = 0; k < n; ++k) roots_[k] = unit_root(k, n);
  additive_.resize(q);
  for (std::uint64_t a = 0; a < q; ++a) additive_[a] = unit_root(a, q);
}

std::shared_ptr<const CharacterTable> CharacterTable::build(std::uint64_t q) {
  return std::shared_ptr<const CharacterTable>(new CharacterTable(q));
}

std::uint32_t CharacterTable::dlog(std::uint64_t a) const {
  a %= q_;
  if (a == 0) throw DomainError("discrete log of a multiple of the modulus");
  return dlog_[a];
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterTable> table, std::uint64_t index)
    : table_(std::move(table)), j_(index) {
  if (!table_) throw ValidationError("character without a table");
  if (j_ >= table_->order()) throw ValidationError("character index out of range");
}

DirichletCharacter DirichletCharacter::conj() const {
  return {table_, (table_->order() - j_) % table_->order()};
}

const cplx& DirichletCharacter::value_reduced(std::uint64_t r) const {
  static const cplx kZero{0.0, 0.0};
  if (r == 0) return kZero;
  return table_->root(j_ * table_->dlog(r));
}

cplx DirichletCharacter::value(std::int64_t a) const {
  auto q = static_cast<std::int64_t>(table_->modulus());
  std::int64_t r = a % q;
  if (r < 0) r += q;
  return value_reduced(static_cast<std::uint64_t>(r));
}

cplx gauss_sum(const DirichletCharacter& chi) {
  if (!chi.primitive()) throw DomainError("Gauss sum requested for the principal character");
  const auto& t = chi.table();
  const std::uint64_t q = t.modulus();
  cplx sum{0.0, 0.0};
  for (std::uint64_t a = 1; a < q; ++a) sum += chi.value_reduced(a) * t.additive(a);
  return sum / std::sqrt(static_cast<double>(q));
}

std::vector<DirichletCharacter> enumerate_primitive(const std::shared_ptr<const CharacterTable>& table) {
  std::vector<DirichletCharacter> out;
  out.reserve(table->order() - 1);
  for (std::uint64_t j = 1; j < table->order(); ++j) out.emplace_back(table, j);
  return out;
}

std::vector<cplx> twisted_sums(const CharacterTable& table, std::span<const std::uint64_t> ns,
                               std::span<const cplx> ws, std::span<const std::uint64_t> js) {
  if (ns.size() != ws.size()) throw ValidationError("twisted_sums: term and weight counts differ");
  const std::uint64_t order = table.order();
  std::vector<cplx> buckets(order, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] % table.modulus() == 0) continue;
    buckets[table.dlog(ns[i] % table.modulus())] += ws[i];
  }
  std::vector<cplx> out;
  out.reserve(js.size());
  for (std::uint64_t j : js) {
    cplx acc(0.0, 0.0);
    std::uint64_t idx = 0;
    const std::uint64_t step = j % order;
    for (std::uint64_t k = 0; k < order; ++k) {
      if (buckets[k] != 0.0) acc += table.root(idx) * buckets[k];
      idx += step;
      if (idx >= order) idx -= order;
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace twistarg
