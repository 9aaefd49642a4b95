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
#include <memory>
#include <span>
#include <vector>

#include "twistarg/characters.hpp"
#include "twistarg/forms.hpp"

// L(s, f x chi) and its completion Lambda(s) = Q^s Gamma(s + kappa) L(s),
// Q = q sqrt(r) / (2 pi), evaluated for a whole family of characters mod q at once.

namespace twistarg {

struct AfeOptions {
  /// Truncation budget, in units of |Q^s Gamma(s + kappa)| (i.e. absolute error on L).
  double target_accuracy = 1e-13;
  double height_cap = 60.0;
  /// Contour rotation keeps at most e^{rotation_loss} cancellation between terms.
  double rotation_loss = 6.0;
  /// For Re s >= direct_sigma the Dirichlet series is summed instead of the AFE,
  /// and Re s <= 1 - direct_sigma is reflected through the functional equation.
  double direct_sigma = 5.0;
};

enum class Output { Completed, L };

/// Per-modulus evaluation engine shared by every character mod q.
class LKernel {
 public:
  LKernel(std::shared_ptr<const HeckeForm> form, std::shared_ptr<const CharacterTable> table, AfeOptions options = {});

  const HeckeForm& form() const { return *form_; }
  const std::shared_ptr<const HeckeForm>& form_ptr() const { return form_; }
  const CharacterTable& table() const { return *table_; }
  const std::shared_ptr<const CharacterTable>& table_ptr() const { return table_; }
  const AfeOptions& options() const { return options_; }
  double Q() const { return Q_; }
  double kappa() const { return kappa_; }
  /// Root number of L(s, f x chi_j).
  cplx eps(std::uint64_t j) const { return eps_[j]; }

  /// Q^s Gamma(s + kappa).
  cplx gamma_factor(cplx s) const;
  /// Number of AFE terms needed at s; ResourceError if beyond the coefficient table.
  std::size_t afe_cutoff(cplx s) const;
  /// The same count without the table check; valid for any kernel, even one with a tiny table.
  std::size_t afe_terms(cplx s) const;
  /// Contour rotation angle used at height t.
  double rotation(double t) const;

  /// Lambda(s) or L(s) for each character index in `js`.
  std::vector<cplx> evaluate(cplx s, std::span<const std::uint64_t> js, Output kind) const;

  /// Residue-class buckets of the Dirichlet series sum_{n<=N} lambda(n) n^{-s}, by discrete log.
  std::vector<cplx> series_buckets(cplx s, std::size_t N) const;
  /// Rigorous bound for sum_{n>N} d(n) n^{-sigma}, sigma > 1.
  double divisor_tail_bound(double sigma, std::size_t N) const;

 private:
  std::vector<cplx> evaluate_afe(cplx s, std::span<const std::uint64_t> js) const;
  std::vector<cplx> evaluate_direct(cplx s, std::span<const std::uint64_t> js) const;
  std::vector<cplx> combine(const std::vector<cplx>& first, const std::vector<cplx>* second,
                            std::span<const std::uint64_t> js) const;

  std::shared_ptr<const HeckeForm> form_;
  std::shared_ptr<const CharacterTable> table_;
  AfeOptions options_;
  double Q_;
  double log_Q_;
  double kappa_;
  std::vector<cplx> eps_;
  std::vector<std::int32_t> ind_;  // discrete log of n mod q, -1 when q | n
  std::vector<double> log_n_;
  std::vector<std::uint16_t> divisors_;
};

/// L(s, f x chi) bound to one character.
class TwistedL {
 public:
  TwistedL(std::shared_ptr<const LKernel> kernel, std::uint64_t j);
  static TwistedL make(std::shared_ptr<const HeckeForm> form, std::uint64_t q, std::uint64_t j, AfeOptions options = {});

  const LKernel& kernel() const { return *kernel_; }
  const std::shared_ptr<const LKernel>& kernel_ptr() const { return kernel_; }
  DirichletCharacter chi() const { return {kernel_->table_ptr(), j_}; }
  std::uint64_t index() const { return j_; }
  std::uint64_t modulus() const { return kernel_->table().modulus(); }
  double Q() const { return kernel_->Q(); }
  double kappa() const { return kernel_->kappa(); }
  cplx eps() const { return kernel_->eps(j_); }
  double target_accuracy() const { return kernel_->options().target_accuracy; }
  TwistedL conj() const { return {kernel_, (kernel_->table().order() - j_) % kernel_->table().order()}; }

 private:
  std::shared_ptr<const LKernel> kernel_;
  std::uint64_t j_;
};

/// Largest AFE cutoff over a grid of the box [sigma_lo, sigma_hi] x [t_lo, t_hi] (sigma step 1/4, t step 1).
std::size_t coefficients_needed(const LKernel& kernel, double sigma_lo, double sigma_hi, double t_lo, double t_hi);

/// eps(f) chi(r) eps_chi^2.
cplx root_number(const HeckeForm& form, const DirichletCharacter& chi);

struct SeriesValue {
  cplx value;
  double tail_bound;
};

/// Partial Dirichlet series with a rigorous tail bound; Re s >= 1.5.
SeriesValue dirichlet_series_value(const TwistedL& L, cplx s, std::size_t N);

/// sum_n lambda(n) chi(n) n^{-s} w(n / N0) with w = 1 on [0, 1], 0 beyond 2 and C-infinity
/// in between. Converges much faster than plain truncation near Re s = 1.5.
cplx smoothed_dirichlet_series(const TwistedL& L, cplx s, std::size_t N0);

cplx completed_lambda(const TwistedL& L, cplx s);
cplx l_value(const TwistedL& L, cplx s);

/// L'/L(s). `h` is the differencing radius; 0 selects it automatically.
cplx log_derivative(const TwistedL& L, cplx s, double h = 0.0);

/// -sum_{n<=N} Lambda(n) C_f(n) chi(n) n^{-s}, the Dirichlet series of L'/L for Re s > 1.
cplx log_derivative_series(const TwistedL& L, cplx s, std::size_t N);

}  // namespace twistarg
