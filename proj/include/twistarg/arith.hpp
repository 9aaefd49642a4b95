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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Elementary multiplicative number theory shared by every module.

namespace twistarg {

using i128 = __int128;

struct PrimePower {
  std::uint64_t p = 0;
  int m = 0;
};

/// Smallest-prime-factor sieve on [0, limit].
class Sieve {
 public:
  explicit Sieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool is_prime(std::uint64_t n) const;
  std::uint64_t smallest_factor(std::uint64_t n) const;
  const std::vector<std::uint64_t>& primes() const { return primes_; }

  /// Primes p <= bound, in increasing order.
  std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) const;

  std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) const;

  /// Number of divisors d(n).
  std::uint64_t divisor_count(std::uint64_t n) const;

  /// (p, m) when n = p^m with m >= 1, empty otherwise.
  std::optional<PrimePower> prime_power(std::uint64_t n) const;

  /// von Mangoldt function: log p if n = p^m, else 0.
  double von_mangoldt(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint64_t> primes_;
};

/// Deterministic primality for 64-bit integers (Miller-Rabin with fixed bases).
bool is_prime_u64(std::uint64_t n);

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

/// Distinct prime factors by trial division.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

std::string to_decimal(i128 v);
i128 parse_decimal(std::string_view text);

}  // namespace twistarg
