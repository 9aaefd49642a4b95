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
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "twistarg/lfunc.hpp"
#include "twistarg/zeros.hpp"

// Invariant checks shared by the `check` command and the acceptance runner.

namespace twistarg {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

/// max |sum_a chi_i(a) conj(chi_j(a)) - (q - 1) [i = j]| over all pairs of characters mod q.
double character_orthogonality_error(const std::shared_ptr<const CharacterTable>& table);

/// max ||eps_chi| - 1| over the primitive characters.
double gauss_unit_error(const std::shared_ptr<const CharacterTable>& table);

/// |Lambda(s) - eps Lambda(1 - s, chi bar)| over the larger of |Q^s Gamma(s + kappa)|, |Q^{1-s} Gamma(1 - s + kappa)|.
double fe_residual(const TwistedL& L, cplx s);

/// |Im| / (|value| + 1e-4) of the rotated completed function at 1/2 + it. At most 1e-8 is
/// the same as |Im| <= 1e-8 |value| + 1e-12.
double hardy_imag_relative(const TwistedL& L, double t);

struct ExponentialConfig {
  double a = 0.0;
  double b = 0.0;
  double sigma_prime = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

/// A window of height 1..4 with b above the growth threshold and sigma' straddling the zero line.
ExponentialConfig random_exponential_config(std::mt19937_64& rng);

SelbergCheck run_exponential_config(const ExponentialConfig& c);

/// Orthogonality, Gauss sums, functional equation, Dirichlet series agreement, realness on
/// the line, the weighted zero identity, and the dual-route oracle at one modulus.
std::vector<CheckResult> check_suite(const std::shared_ptr<const LKernel>& kernel, std::uint64_t seed = 1);

}  // namespace twistarg
