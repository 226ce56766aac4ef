// Copyright 2026 The cohkit Authors
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

// Finite-n simulation of the asymptotic protocols.
//
// n-copy objects are never materialized: concentration works on sampled
// types and exact log-factorials, dilution on the exact probability of the
// entropy-typical set, formation on typical counts of ensemble labels. The
// only dense n-copy computations are the small-n reconstruction check in
// simulate_formation() and the Gram-matrix covering check.

#ifndef COHKIT_ASYMPTOTIC_HPP_
#define COHKIT_ASYMPTOTIC_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cohkit/measures.hpp"
#include "cohkit/qstate.hpp"

namespace cohkit {

inline constexpr std::int64_t kMaxCopies = 1'000'000'000'000;
inline constexpr std::int64_t kDefaultNodeBudget = 50'000'000;

struct TypeMeasurementOutcome {
  std::vector<std::int64_t> type_counts;
  double probability = 0.0;     // Pr(type) = |T(P)| prod q_i^{n_i}
  double log_class_size = 0.0;  // log2 |T(P)|
  double achieved_rate = 0.0;   // log_class_size / n
};

struct TypicalProbability {
  double probability = 0.0;  // Pr(T^n_{Q,delta})
  double pruned_mass = 0.0;  // probability never visited; bounds the error
  std::int64_t nodes = 0;
};

struct DilutionDetail {
  double typical_probability = 0.0;
  double pruned_mass = 0.0;
  std::int64_t nodes = 0;
  double delta = 0.0;
};

struct FormationDetail {
  double delta1 = 0.0;            // after the small-n fallback (see simulate_formation)
  double delta2 = 0.0;
  double typical_label_mass = 0.0;  // Pr(label counts typical), exact
  std::size_t ensemble_size = 0;
  bool reconstructed = false;
  double reconstruction_fidelity = 0.0;  // F(rho^{(x)n}, rho^(n))
  double fidelity_lower_bound = 0.0;     // joint-concavity bound
};

struct ProtocolTrace {
  std::int64_t n = 0;
  int trials = 0;
  std::vector<double> rates;
  double mean_rate = 0.0;
  double rate_stddev = 0.0;  // sample standard deviation; 0 for one trial
  std::vector<double> fidelity;
  double target_rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<TypeMeasurementOutcome> outcomes;  // concentration only
  std::optional<DilutionDetail> dilution;
  std::optional<FormationDetail> formation;
};

/// log2 of the multinomial coefficient n! / prod n_i! via lgamma.
double log2_type_class_size(std::span<const std::int64_t> counts);

/// Exact probability that an i.i.d. Q sequence of length n satisfies
/// |-(1/n) log2 Q(x^n) - H(Q)| <= delta. Letters of equal probability are
/// pooled; the count vectors are enumerated depth-first from the mode of
/// each conditional binomial, dropping branches below 1e-20. Throws
/// BudgetExceeded past `node_budget` visited nodes.
TypicalProbability typical_set_probability(std::span<const double> q, std::int64_t n, double delta,
                                           std::int64_t node_budget = kDefaultNodeBudget);

/// Type measurement on psi^{(x)n}: per trial a type drawn from the induced
/// multinomial, rate log2|T(P)| / n, output maximally coherent on T(P).
ProtocolTrace simulate_concentration(const PureState& psi, std::int64_t n, int trials,
                                     std::uint64_t seed);

/// Typical-subspace dilution: consumes n(H + delta) maximally coherent bits;
/// fidelity sqrt(Pr(T^n_{Q,delta})).
ProtocolTrace simulate_dilution(const PureState& psi, std::int64_t n, double delta = 0.02,
                                std::uint64_t seed = 0,
                                std::int64_t node_budget = kDefaultNodeBudget);

struct FormationOptions {
  double delta1 = 0.01;
  double delta2 = 0.01;
  int trials = 1;
  std::uint64_t seed = 0;
  /// Per-trial fidelity prod_j sqrt(Pr_j) from the member dilutions; turn off
  /// for large n with many distinct member populations.
  bool member_fidelity = true;
  /// Reconstruct rho^(n) and compute its fidelity when dim^n is at most this
  /// (capped at 4096).
  int reconstruct_dim_cap = 256;
  std::int64_t node_budget = kDefaultNodeBudget;
};

/// Formation protocol on an ensemble of rho: per trial, label counts N_j are
/// drawn from the multinomial conditioned on |N_j / n - p_j| <= delta1 and
/// each member block is diluted at delta2. Rate per trial:
///   sum_j (N_j / n + delta1) (C(psi_j) + delta2).
/// When no count vector meets delta1 (small n), delta1 is raised to that of
/// the largest-remainder rounding of n p; when a member's typical set is
/// empty, its delta2 is raised to the smallest deviation attained.
ProtocolTrace simulate_formation(const Ensemble& ensemble, std::int64_t n,
                                 const FormationOptions& options = {});
/// Same, on the optimizer ensemble from coherence_of_formation(rho).
ProtocolTrace simulate_formation(const DensityMatrix& rho, std::int64_t n,
                                 const FormationOptions& options = {},
                                 const RoofOptions& roof = {});

/// C_r(rho), the distillation rate.
double distillable_rate(const DensityMatrix& rho);

inline constexpr double kCoveringEpsilons[] = {0.05, 0.1, 0.2, 0.4};

struct CoveringCheckReport {
  int S = 0;
  std::int64_t M = 0;            // floor(|T(P)| / S) subsets per partition
  std::int64_t class_size = 0;   // |T(P)|
  std::vector<std::int64_t> type_counts;
  std::vector<double> deviations;  // ||(1/S) sum_j Y_j - sigma(P)||_1
  std::vector<double> epsilons;
  std::vector<double> fraction_good;  // fraction of deviations <= epsilons[k]
  double median = 0.0;
  std::uint64_t seed = 0;
};

/// Covering statistics for the ensemble members W_x with prior = weights:
/// the type P nearest n * weights is fixed, T(P) is shuffled and cut into M
/// subsets of size S per trial, and the first `subsets_per_trial` subsets
/// (0: all M) contribute deviations. Trace norms are taken in Gram
/// coordinates on span{W_{x^n}}. Requires alphabet^n <= 1e5.
CoveringCheckReport covering_check(const Ensemble& ensemble, int n, int S, int trials,
                                   std::uint64_t seed, int subsets_per_trial = 0);

struct CoveringTrend {
  std::vector<CoveringCheckReport> reports;
  std::vector<double> medians;
  /// One-sided Mann-Whitney p-values that deviations at S_{k+1} are
  /// stochastically smaller than at S_k.
  std::vector<double> p_values;
  bool decreasing = false;  // medians strictly decreasing and all p < alpha
};

CoveringTrend covering_trend(const Ensemble& ensemble, int n, const std::vector<int>& sizes,
                             int trials, std::uint64_t seed, int subsets_per_trial = 1,
                             double alpha = 0.05);

/// One-sided Mann-Whitney U test (normal approximation, tie and continuity
/// corrected): p-value for "x tends to exceed y".
double mann_whitney_greater(const std::vector<double>& x, const std::vector<double>& y);

/// 2^{-n (Rtilde - R) / 2}; throws DomainError unless Rtilde > R.
double converse_fidelity_bound(std::int64_t n, double R, double Rtilde);

}  // namespace cohkit

#endif  // COHKIT_ASYMPTOTIC_HPP_
