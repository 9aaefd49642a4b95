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
#include <span>
#include <string>
#include <vector>

#include "twistarg/argument.hpp"
#include "twistarg/lfunc.hpp"

// Character averages over the q - 2 primitive characters: moments of S, M and
// R = S - M, the exact orthogonality evaluation of sum_chi |P(chi)|^{2n} for the
// prime polynomial P, prime-sum constants, and the Gaussian comparison of S.

namespace twistarg {

/// (2n)! / (n! (2 pi)^{2n}).
double moment_constant(int n);

struct PrimeSumStats {
  double x = 0.0;
  std::size_t primes = 0;
  double inv_p = 0.0;      ///< sum 1/p
  double log_p = 0.0;      ///< sum log p / p
  double log2_p = 0.0;     ///< sum log^2 p / p
  double lambda2_p = 0.0;  ///< sum lambda(p)^2 / p
  double loglog_x = 0.0;
  double log_x = 0.0;
  double log2_x = 0.0;
};

/// Sums over primes p <= x. ResourceError if x exceeds the coefficient table.
PrimeSumStats prime_sum_stats(const HeckeForm& form, double x);

/// P(chi) = sum_{p <= x3} lambda(p) chi(p) p^{-1/2 - it}; these are its weights.
std::vector<cplx> prime_weights(const HeckeForm& form, std::uint64_t x3, double t, std::vector<std::uint64_t>* primes);

struct DiagonalOracle {
  std::uint64_t q = 0;
  std::uint64_t x3 = 0;
  double t = 0.0;
  int n = 1;
  double direct = 0.0;      ///< sum over all q - 1 characters of |P|^{2n}
  double orthogonal = 0.0;  ///< (q - 1) times the congruent 2n-tuple sum
  double difference = 0.0;
  double principal = 0.0;  ///< |P(chi_0)|^{2n}
  double primitive = 0.0;  ///< direct - principal
  /// (q - 1) sum lambda(p)^2 / p for n = 1 and x3 < q, else NaN.
  double closed_form = 0.0;
  std::size_t tuples = 0;  ///< congruent 2n-tuples visited
};

/// sum_{chi mod q} |P(chi)|^{2n} two ways. ResourceError when pi(x3)^{2n} > 1e8 or q - 1 > 1e4.
DiagonalOracle diagonal_oracle(const LKernel& kernel, std::uint64_t x3, double t, int n);

/// avg M^2 over primitive characters, rebuilt from the orthogonality relations:
/// ((q-1) sum |w_p|^2 - (q-1) Re sum_{p p' = 1 mod q} w_p w_p') / (2 pi^2) minus the principal term.
struct SecondMomentAssembly {
  double diagonal = 0.0;      ///< (q - 1) sum lambda(p)^2 / p
  double off_diagonal = 0.0;  ///< (q - 1) Re sum_{p p' = 1 mod q} w_p w_p'
  double principal = 0.0;     ///< M(chi_0)^2
  double average = 0.0;       ///< the assembled primitive average of M^2
  double prediction = 0.0;    ///< sum lambda(p)^2 / p / (2 pi^2)
};

SecondMomentAssembly assemble_m2(const LKernel& kernel, std::uint64_t x3, double t);

struct SweepOptions {
  SArgOptions sarg;
  /// A character whose path meets a zero is retried at t + nudge, then t - nudge, and so on.
  double nudge = 1e-3;
  int max_nudges = 2;
  unsigned workers = 1;
  /// Characters per shared path.
  std::size_t chunk = 256;
};

struct CharacterSample {
  std::uint64_t j = 0;
  double t = 0.0;  ///< height actually used, differs from the requested t after a nudge
  double S = 0.0;
  double M = 0.0;
  double R = 0.0;
  bool nudged = false;
};

struct SSweep {
  std::vector<CharacterSample> samples;  ///< j = 1..q-2 in order
  std::size_t nudged = 0;
  std::size_t evaluations = 0;
};

/// S(t) for every primitive character, and M, R when x3 > 0. NumericError listing the
/// characters that still fail after all nudges.
SSweep sweep_s(const LKernel& kernel, double t, std::uint64_t x3, const SweepOptions& options = {});

struct MomentRow {
  int n = 1;
  double s_moment = 0.0;  ///< avg S^{2n}
  double m_moment = 0.0;  ///< avg M^{2n}
  double r_moment = 0.0;  ///< avg |R|^{2n}
  double m_odd = 0.0;     ///< avg M^{2n-1}, reported only
  double s_odd = 0.0;     ///< avg S^{2n-1}, reported only
  double constant = 0.0;  ///< moment_constant(n)
  double prediction_loglog = 0.0;
  double prediction_prime_sum = 0.0;
  /// |avg S^{2n} - avg M^{2n}| against sum_l C(2n, l) (avg M^{2n})^{1 - l/2n} (avg |R|^{2n})^{l/2n}.
  double holder_lhs = 0.0;
  double holder_rhs = 0.0;
  bool holder_ok = false;
};

struct MomentReport {
  std::uint64_t q = 0;
  double t = 0.0;
  std::uint64_t x3 = 0;
  std::vector<int> n_list;
  std::size_t characters = 0;
  std::size_t nudged = 0;
  double loglog_q = 0.0;
  double prime_sum = 0.0;  ///< sum_{p <= x3} lambda(p)^2 / p
  std::vector<MomentRow> rows;
  std::vector<CharacterSample> samples;
  double runtime_seconds = 0.0;
};

/// Default M cutoff: x = max(4, q^{1/6}), i.e. x^3 = max(64, sqrt q).
std::uint64_t default_x_cubed(std::uint64_t q);

/// Requires t > 0 and x3 <= the coefficient table.
MomentReport sweep_moments(const LKernel& kernel, double t, std::uint64_t x3, std::vector<int> n_list,
                           const SweepOptions& options = {});

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  double mass = 0.0;
  double gaussian_mass = 0.0;
};

struct CltResult {
  std::uint64_t q = 0;
  double t = 0.0;
  double scale = 0.0;  ///< sqrt(log log q)
  std::vector<HistogramBin> histogram;
  double ks_distance = 0.0;
  std::size_t characters = 0;
  std::size_t nudged = 0;
};

/// CDF of N(0, 1 / (2 pi^2)).
double clt_cdf(double xi);

/// Empirical law of values / scale against N(0, 1 / (2 pi^2)). Bins cover a symmetric
/// range wide enough for every value, so the masses sum to 1.
CltResult clt_from_values(std::span<const double> values, double scale, int bins);

/// S(t) / sqrt(log log q) over the primitive characters. Requires t > 0.
CltResult clt_distribution(const LKernel& kernel, double t, int bins, const SweepOptions& options = {});

struct LargeSieveRatio {
  std::uint64_t q = 0;
  double y = 0.0;
  int n = 1;
  double weighted = 0.0;  ///< sum* |sum_{p<y} (log p / log y) chi(p) / sqrt p|^{2n} / q
  double squares = 0.0;   ///< sum* |sum_{p<y} chi(p^2) / p|^{2n} / q
};

/// Both averages with the extremal weights; DomainError unless 1 < y <= q^{1/n}.
LargeSieveRatio large_sieve_ratio(const CharacterTable& table, double y, int n);

}  // namespace twistarg
