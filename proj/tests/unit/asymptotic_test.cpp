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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "cohkit/asymptotic.hpp"
#include "cohkit/incoherent.hpp"
#include "cohkit/measures.hpp"

namespace cohkit {
namespace {

constexpr double kH09 = 0.4689955935892811;

PureState skewed(double p0) {
  Vector v(2);
  v << std::sqrt(p0), std::sqrt(1.0 - p0);
  return PureState(v);
}

DensityMatrix qubit_mixed() {
  Matrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;
  return DensityMatrix(m);
}

// Independent evaluation by direct summation: letters split into a group of
// `a` letters of probability qa and the rest of probability qb, so the
// sequence probability depends only on how many letters fall in the first.
double grouped_typical_mass(int a, double qa, int b, double qb, int n, double delta) {
  const double h = -(a * qa * std::log2(qa) + b * qb * std::log2(qb));
  const double pa = a * qa;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double logp = -(k * std::log2(qa) + (n - k) * std::log2(qb)) / n;
    if (std::abs(logp - h) > delta + 1e-12) continue;  // boundary counts as typical
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    total += std::exp(lc + k * std::log(pa) + (n - k) * std::log1p(-pa));
  }
  return total;
}

double binomial_typical_mass(double q0, int n, double delta) {
  return grouped_typical_mass(1, q0, 1, 1.0 - q0, n, delta);
}

TEST(TypeClassSize, ExactSmallCases) {
  const std::int64_t c1[] = {2, 2};
  EXPECT_NEAR(log2_type_class_size(c1), std::log2(6.0), 1e-12);
  const std::int64_t c2[] = {5, 0, 0};
  EXPECT_NEAR(log2_type_class_size(c2), 0.0, 1e-12);
  const std::int64_t c3[] = {1, 2, 3};
  EXPECT_NEAR(log2_type_class_size(c3), std::log2(60.0), 1e-12);
}

TEST(TypicalSet, MatchesDirectBinomialSum) {
  const double q[] = {0.9, 0.1};
  for (int n : {10, 100, 1000, 5000}) {
    for (double delta : {0.0, 0.02, 0.1}) {
      const auto t = typical_set_probability(q, n, delta);
      EXPECT_NEAR(t.probability, binomial_typical_mass(0.9, n, delta), 1e-10) << "n=" << n << " delta=" << delta;
      EXPECT_LE(t.pruned_mass, 1e-12);
    }
  }
}

TEST(TypicalSet, PooledEqualLetters) {
  // Equal-probability letters: every sequence has the same probability.
  const double q[] = {0.25, 0.25, 0.25, 0.25};
  EXPECT_NEAR(typical_set_probability(q, 300, 0.0).probability, 1.0, 1e-12);
  const double mixed[] = {0.5, 0.25, 0.25};
  const auto t = typical_set_probability(mixed, 400, 0.05);
  EXPECT_NEAR(t.probability, grouped_typical_mass(1, 0.5, 2, 0.25, 400, 0.05), 1e-10);
  const double five[] = {0.1, 0.1, 0.1, 0.35, 0.35};
  EXPECT_NEAR(typical_set_probability(five, 600, 0.03).probability,
              grouped_typical_mass(3, 0.1, 2, 0.35, 600, 0.03), 1e-10);
}

TEST(TypicalSet, FrozenValueAtTenThousand) {
  const double q[] = {0.9, 0.1};
  EXPECT_NEAR(typical_set_probability(q, 10000, 0.02).probability, 0.9657317881, 1e-9);
}

TEST(TypicalSet, Budget) {
  const double q[] = {0.1, 0.2, 0.3, 0.4};
  EXPECT_THROW(typical_set_probability(q, 100000, 0.01, 1000), BudgetExceeded);
}

TEST(Concentration, Examples) {
  const auto phi = simulate_concentration(maximally_coherent(2), 4000, 10, 1);
  EXPECT_NEAR(phi.target_rate, 1.0, 1e-15);
  EXPECT_GT(phi.mean_rate, 0.99);
  EXPECT_LE(phi.mean_rate, 1.0);

  const auto zero = simulate_concentration(PureState::basis(3, 1), 1000, 5, 1);
  for (double r : zero.rates) EXPECT_EQ(r, 0.0);
}

TEST(Concentration, TraceInvariants) {
  const auto t = simulate_concentration(skewed(0.9), 10000, 50, 7);
  ASSERT_EQ(t.rates.size(), 50u);
  ASSERT_EQ(t.outcomes.size(), 50u);
  EXPECT_NEAR(t.mean_rate, std::accumulate(t.rates.begin(), t.rates.end(), 0.0) / 50.0, 1e-12);
  EXPECT_EQ(t.seed, 7u);
  for (const auto& o : t.outcomes) {
    EXPECT_EQ(std::accumulate(o.type_counts.begin(), o.type_counts.end(), std::int64_t{0}), 10000);
    const double f = static_cast<double>(o.type_counts[0]) / 10000.0;
    const double hp = binary_entropy(f);
    EXPECT_LE(o.achieved_rate, hp + 1e-12);
    EXPECT_GE(o.achieved_rate, hp - 2.0 * std::log2(10001.0) / 10000.0);
    EXPECT_GE(o.probability, 0.0);
    EXPECT_LE(o.probability, 1.0);
  }
  for (double f : t.fidelity) EXPECT_EQ(f, 1.0);
  EXPECT_NEAR(t.mean_rate, kH09, 0.01);
}

TEST(Concentration, DeterministicPerSeed) {
  const auto a = simulate_concentration(skewed(0.7), 2000, 8, 99);
  const auto b = simulate_concentration(skewed(0.7), 2000, 8, 99);
  EXPECT_EQ(a.rates, b.rates);
  EXPECT_EQ(a.trial_seeds, b.trial_seeds);
}

TEST(Concentration, Budget) {
  EXPECT_THROW(simulate_concentration(skewed(0.7), kMaxCopies + 1, 1, 0), BudgetExceeded);
  EXPECT_THROW(simulate_concentration(skewed(0.7), 100, 0, 0), DomainError);
}

TEST(Dilution, Examples) {
  const auto phi = simulate_dilution(maximally_coherent(2), 1000, 0.0);
  EXPECT_NEAR(phi.fidelity[0], 1.0, 1e-12);
  EXPECT_NEAR(phi.rates[0], 1.0, 1e-15);

  const auto zero = simulate_dilution(PureState::basis(2, 0), 1000, 0.02);
  EXPECT_NEAR(zero.fidelity[0], 1.0, 1e-15);
  EXPECT_NEAR(zero.rates[0], 0.02, 1e-15);
}

TEST(Dilution, SkewedQubit) {
  const auto t = simulate_dilution(skewed(0.9), 10000, 0.02);
  EXPECT_NEAR(t.rates[0], kH09 + 0.02, 1e-12);
  EXPECT_NEAR(t.fidelity[0], std::sqrt(0.9657317881), 1e-9);
  ASSERT_TRUE(t.dilution.has_value());
  EXPECT_LE(t.dilution->pruned_mass, 1e-12);
}

TEST(Dilution, FidelityGrowsWithN) {
  double last = 0.0;
  for (std::int64_t n : {1000, 4000, 16000, 64000}) {
    const double f = simulate_dilution(skewed(0.9), n, 0.02).fidelity[0];
    EXPECT_GE(f, last);
    last = f;
  }
  EXPECT_GT(last, 0.9999);
}

TEST(Dilution, BracketsConcentration) {
  const auto c = simulate_concentration(skewed(0.8), 20000, 20, 3);
  const auto d = simulate_dilution(skewed(0.8), 20000, 0.02);
  const double h = binary_entropy(0.8);
  EXPECT_LE(c.mean_rate, h + 1e-3);
  EXPECT_GE(d.rates[0], h);
  EXPECT_LE(d.rates[0] - c.mean_rate, 2 * 0.02 + 2.0 * std::log2(20001.0) / 20000.0 + 0.01);
}

TEST(Formation, DiagonalCostsNothing) {
  const std::vector<double> p{0.3, 0.7};
  FormationOptions o;
  o.delta1 = o.delta2 = 0.0;
  RoofOptions r;
  r.restarts = 2;
  const auto t = simulate_formation(DensityMatrix::diagonal(p), 1000, o, r);
  EXPECT_NEAR(t.rates[0], 0.0, 1e-12);
}

TEST(Formation, PureStateIsDilution) {
  const Ensemble e({1.0}, {skewed(0.9)});
  const auto t = simulate_formation(e, 10000);
  EXPECT_NEAR(t.rates[0], (1.0 + 0.01) * (kH09 + 0.01), 1e-12);
}

TEST(Formation, QubitRateAccounting) {
  FormationOptions o;
  o.trials = 5;
  o.seed = 4;
  RoofOptions r;
  r.restarts = 8;
  r.seed = 1;
  const auto t = simulate_formation(qubit_mixed(), 10000, o, r);
  ASSERT_EQ(t.rates.size(), 5u);
  EXPECT_NEAR(t.mean_rate, kH09, 0.05);
  ASSERT_TRUE(t.formation.has_value());
  EXPECT_FALSE(t.formation->reconstructed);
}

TEST(Formation, SmallNReconstruction) {
  FormationOptions o;
  o.seed = 2;
  RoofOptions r;
  r.restarts = 8;
  r.seed = 1;
  const auto t = simulate_formation(qubit_mixed(), 6, o, r);
  ASSERT_TRUE(t.formation.has_value());
  ASSERT_TRUE(t.formation->reconstructed);
  EXPECT_GE(t.formation->reconstruction_fidelity, t.formation->fidelity_lower_bound - 1e-9);
  EXPECT_GT(t.formation->fidelity_lower_bound, 0.0);
  EXPECT_LE(t.formation->reconstruction_fidelity, 1.0 + 1e-9);
}

TEST(DistillableRate, Examples) {
  EXPECT_NEAR(distillable_rate(DensityMatrix::from_pure(maximally_coherent(2))), 1.0, 1e-12);
  const std::vector<double> p{0.4, 0.6};
  EXPECT_EQ(distillable_rate(DensityMatrix::diagonal(p)), 0.0);
  EXPECT_NEAR(distillable_rate(qubit_mixed()), 0.2780719051126377, 1e-12);
}

TEST(Covering, IdenticalStatesHaveZeroDeviation) {
  const Ensemble e({0.5, 0.5}, {maximally_coherent(2), maximally_coherent(2)});
  const auto rep = covering_check(e, 8, 4, 3, 1);
  for (double d : rep.deviations) EXPECT_NEAR(d, 0.0, 1e-9);
  for (double f : rep.fraction_good) EXPECT_EQ(f, 1.0);
}

TEST(Covering, WholeClassHasZeroDeviation) {
  const Ensemble e({0.5, 0.5}, {PureState::basis(2, 0), maximally_coherent(2)});
  const auto rep = covering_check(e, 8, 70, 2, 1);
  EXPECT_EQ(rep.class_size, 70);
  EXPECT_EQ(rep.M, 1);
  for (double d : rep.deviations) EXPECT_NEAR(d, 0.0, 1e-9);
}

TEST(Covering, ReportInvariants) {
  const Ensemble e({0.5, 0.5}, {PureState::basis(2, 0), maximally_coherent(2)});
  const auto rep = covering_check(e, 8, 8, 4, 5);
  EXPECT_EQ(rep.M, 70 / 8);
  EXPECT_EQ(rep.deviations.size(), static_cast<std::size_t>(4 * rep.M));
  for (double d : rep.deviations) EXPECT_GE(d, 0.0);
  for (std::size_t k = 1; k < rep.fraction_good.size(); ++k) {
    EXPECT_GE(rep.fraction_good[k], rep.fraction_good[k - 1]);
  }
  EXPECT_THROW(covering_check(e, 8, 71, 1, 1), DomainError);
  EXPECT_THROW(covering_check(e, 20, 8, 1, 1), BudgetExceeded);
}

TEST(Covering, TrendAtSmallN) {
  const Ensemble e({0.5, 0.5}, {PureState::basis(2, 0), maximally_coherent(2)});
  const auto tr = covering_trend(e, 10, {4, 16, 64}, 12, 3);
  ASSERT_EQ(tr.medians.size(), 3u);
  EXPECT_GT(tr.medians[0], tr.medians[2]);
}

TEST(MannWhitney, Direction) {
  const std::vector<double> big{5, 6, 7, 8, 9, 10, 11, 12};
  const std::vector<double> small{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_LT(mann_whitney_greater(big, small), 0.05);
  EXPECT_GT(mann_whitney_greater(small, big), 0.95);
  EXPECT_NEAR(mann_whitney_greater(big, big), 0.5, 0.1);
}

TEST(Converse, Bound) {
  EXPECT_NEAR(converse_fidelity_bound(10, 1.0, 1.2), 0.5, 1e-12);
  EXPECT_NEAR(converse_fidelity_bound(10, 1.0, 1.0 + 1e-12), 1.0, 1e-9);
  EXPECT_THROW(converse_fidelity_bound(10, 1.0, 1.0), DomainError);
}

TEST(Converse, DirectOverlap) {
  // Rank-2^k uniform superposition vs the 2^m maximally coherent state.
  for (int m = 4; m <= 12; m += 4) {
    for (int k = 1; k < m; ++k) {
      const int D = 1 << m;
      Vector limited = Vector::Zero(D);
      limited.head(1 << k).setConstant(1.0 / std::sqrt(double(1 << k)));
      const double f = std::abs(maximally_coherent(D).amplitudes().dot(limited));
      EXPECT_NEAR(f, converse_fidelity_bound(1, k, m), 1e-12);
    }
  }
}

}  // namespace
}  // namespace cohkit
