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

#include "twistarg/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twistarg/errors.hpp"

namespace twistarg {

Sieve::Sieve(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("sieve limit exceeds 32-bit factor table");
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      primes_.push_back(i);
      for (std::uint64_t j = i; j <= limit; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }
}

bool Sieve::is_prime(std::uint64_t n) const {
  if (n > limit_) return is_prime_u64(n);
  return n >= 2 && spf_[n] == n;
}

std::uint64_t Sieve::smallest_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) throw DomainError("smallest_factor: argument out of sieve range");
  return spf_[n];
}

std::vector<std::uint64_t> Sieve::primes_up_to(std::uint64_t bound) const {
  if (bound > limit_) throw ResourceError("primes_up_to: bound exceeds sieve limit");
  auto end = std::upper_bound(primes_.begin(), primes_.end(), bound);
  return {primes_.begin(), end};
}

std::vector<std::pair<std::uint64_t, int>> Sieve::factorize(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw DomainError("factorize: argument out of sieve range");
  std::vector<std::pair<std::uint64_t, int>> out;
  while (n > 1) {
    std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::uint64_t Sieve::divisor_count(std::uint64_t n) const {
  std::uint64_t d = 1;
  for (auto [p, e] : factorize(n)) d *= static_cast<std::uint64_t>(e + 1);
  return d;
}

std::optional<PrimePower> Sieve::prime_power(std::uint64_t n) const {
  if (n < 2) return std::nullopt;
  auto f = factorize(n);
  if (f.size() != 1) return std::nullopt;
  return PrimePower{f[0].first, f[0].second};
}

double Sieve::von_mangoldt(std::uint64_t n) const {
  auto pp = prime_power(n);
  return pp ? std::log(static_cast<double>(pp->p)) : 0.0;
}

namespace {

constexpr unsigned __int128 kI128Max = (static_cast<unsigned __int128>(1) << 127U) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

}  // namespace

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1U;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  // These bases are deterministic for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string to_decimal(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Work with the unsigned magnitude so the most negative value is representable.
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

i128 parse_decimal(std::string_view text) {
  if (text.empty()) throw ValidationError("empty integer literal");
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw ValidationError("integer literal without digits");
  const unsigned __int128 limit = kI128Max + (neg ? 1 : 0);
  unsigned __int128 u = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ValidationError("invalid digit in integer literal '" + std::string(text) + "'");
    unsigned __int128 next = u * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != u || next > limit) throw ValidationError("integer literal out of 128-bit range");
    u = next;
  }
  if (neg) return u == limit ? -static_cast<i128>(kI128Max) - 1 : -static_cast<i128>(u);
  return static_cast<i128>(u);
}

}  // namespace twistarg
