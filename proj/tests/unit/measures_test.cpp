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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "cohkit/incoherent.hpp"
#include "cohkit/measures.hpp"
#include "cohkit/random.hpp"

namespace cohkit {
namespace {

constexpr double kH09 = 0.4689955935892811;      // h(0.9)
constexpr double kCrQubit = 0.2780719051126377;  // 1 - h(0.8)
constexpr double kRoofSlack = 5e-3;

DensityMatrix qubit_mixed() {
  Matrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;
  return DensityMatrix(m);
}

PureState skewed(double p0) {
  Vector v(2);
  v << std::sqrt(p0), std::sqrt(1.0 - p0);
  return PureState(v);
}

RoofOptions roof(int restarts, std::uint64_t seed = 0) {
  RoofOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

TEST(Ensemble, Invariants) {
  EXPECT_THROW(Ensemble({0.5, 0.6}, {PureState::basis(2, 0), PureState::basis(2, 1)}), InvariantViolation);
  EXPECT_THROW(Ensemble({-0.1, 1.1}, {PureState::basis(2, 0), PureState::basis(2, 1)}), InvariantViolation);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {PureState::basis(2, 0), PureState::basis(3, 1)}), DimensionMismatch);
  const Ensemble e({0.5, 0.5}, {PureState::basis(2, 0), maximally_coherent(2)});
  EXPECT_NEAR(e.state()(0, 1).real(), 0.25, 1e-15);
  EXPECT_NEAR(e.average_coherence(), 0.5, 1e-15);
}

TEST(EntropyOfCoherence, Examples) {
  EXPECT_NEAR(entropy_of_coherence(maximally_coherent(2)), 1.0, 1e-15);
  for (int d = 2; d <= 16; ++d) EXPECT_NEAR(entropy_of_coherence(maximally_coherent(d)), std::log2(d), 1e-12);
  EXPECT_NEAR(entropy_of_coherence(skewed(0.9)), kH09, 1e-12);
  EXPECT_EQ(entropy_of_coherence(PureState::basis(3, 2)), 0.0);
}

TEST(RelativeEntropyOfCoherence, Examples) {
  for (int d = 2; d <= 16; ++d) {
    EXPECT_NEAR(relative_entropy_of_coherence(DensityMatrix::from_pure(maximally_coherent(d))), std::log2(d), 1e-12);
  }
  const std::vector<double> p{0.1, 0.2, 0.7};
  EXPECT_EQ(relative_entropy_of_coherence(DensityMatrix::diagonal(p)), 0.0);
  EXPECT_NEAR(relative_entropy_of_coherence(qubit_mixed()), kCrQubit, 1e-12);
}

TEST(RelativeEntropyOfCoherence, BlockPartition) {
  // Coherence inside a block is invisible to the block pinching.
  Matrix m = Matrix::Zero(4, 4);
  m.topLeftCorner(2, 2).setConstant(0.25);
  m(2, 2) = m(3, 3) = 0.25;
  const DensityMatrix r(m);
  EXPECT_NEAR(relative_entropy_of_coherence(r, BasisPartition(4, {{0, 1}, {2}, {3}})), 0.0, 1e-12);
  EXPECT_NEAR(relative_entropy_of_coherence(r), 0.5, 1e-12);
}

TEST(RelativeEntropyOfCoherence, Faithful) {
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const auto r = random_density_matrix(2 + k % 5, rng);
    EXPECT_GT(relative_entropy_of_coherence(r), 1e-9);
  }
}

TEST(RelativeEntropyOfCoherence, AdditiveAndStronglyMonotone) {
  Rng rng(22);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_density_matrix(2 + k % 3, rng);
    const auto b = random_density_matrix(2 + k % 2, rng);
    EXPECT_NEAR(relative_entropy_of_coherence(tensor(a, b)),
                relative_entropy_of_coherence(a) + relative_entropy_of_coherence(b), 1e-8);
    const auto ch = random_incoherent_channel(a.dim(), rng);
    double avg = 0.0;
    for (const auto& o : apply_selective(ch, a)) avg += o.probability * relative_entropy_of_coherence(o.state);
    EXPECT_LE(avg, relative_entropy_of_coherence(a) + 1e-8);
  }
}

TEST(RelativeEntropyOfCoherence, Continuity) {
  Rng rng(23);
  for (int k = 0; k < 40; ++k) {
    const int d = 2 + k % 4;
    const auto r = random_density_matrix(d, rng);
    const double t = 0.05 * rng.uniform();
    const DensityMatrix s((1.0 - t) * r.matrix() + t * random_density_matrix(d, rng).matrix());
    const double eps = std::min(1.0, 2.0 * trace_distance(r, s));
    EXPECT_LE(std::abs(relative_entropy_of_coherence(r) - relative_entropy_of_coherence(s)),
              cr_continuity_bound(d, eps) + 1e-9);
  }
}

TEST(Variational, Examples) {
  const std::vector<double> p{0.3, 0.7};
  const auto diag = relative_entropy_of_coherence_variational(DensityMatrix::diagonal(p));
  EXPECT_NEAR(diag.value, 0.0, 1e-9);
  EXPECT_NEAR(diag.minimizer[0], 0.3, 1e-6);

  const auto phi = relative_entropy_of_coherence_variational(DensityMatrix::from_pure(maximally_coherent(2)));
  EXPECT_NEAR(phi.value, 1.0, 1e-6);
  EXPECT_NEAR(phi.minimizer[0], 0.5, 1e-6);
  EXPECT_NEAR(phi.minimizer[1], 0.5, 1e-6);
}

TEST(Variational, MatchesClosedForm) {
  Rng rng(24);
  for (int k = 0; k < 25; ++k) {
    const auto r = random_density_matrix(2 + k % 5, rng, k % 3 == 0 ? 1 : 0);
    const auto v = relative_entropy_of_coherence_variational(r);
    EXPECT_NEAR(v.value, relative_entropy_of_coherence(r), 1e-6);
    EXPECT_LE(v.gap, 1e-9);
  }
}

TEST(Variational, ReportsNonConvergence) {
  Rng rng(25);
  VariationalOptions o;
  o.max_iterations = 1;
  o.gap_tolerance = 1e-14;
  try {
    relative_entropy_of_coherence_variational(random_density_matrix(4, rng), o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_value()));
  }
}

TEST(CoherenceOfFormation, PureStateIsSingleton) {
  const auto psi = skewed(0.9);
  const auto res = coherence_of_formation(DensityMatrix::from_pure(psi), roof(4));
  EXPECT_NEAR(res.value, kH09, 1e-9);
  EXPECT_EQ(res.ensemble.size(), 1u);
  EXPECT_TRUE(res.converged);
}

TEST(CoherenceOfFormation, DiagonalIsFree) {
  const std::vector<double> p{0.2, 0.5, 0.3};
  const auto res = coherence_of_formation(DensityMatrix::diagonal(p), roof(4));
  EXPECT_NEAR(res.value, 0.0, 1e-12);
  for (const auto& m : res.ensemble.members()) EXPECT_EQ(rank_of_diagonal(m), 1);
}

TEST(CoherenceOfFormation, QubitOracleValue) {
  const auto r = qubit_mixed();
  EXPECT_NEAR(qubit_coherence_of_formation(r), kH09, 1e-12);
  const auto res = coherence_of_formation(r, roof(8, 1));
  EXPECT_NEAR(res.value, kH09, kRoofSlack);
  EXPECT_GE(res.value, kH09 - 1e-9);
}

TEST(CoherenceOfFormation, ReportedEnsembleIsConsistent) {
  Rng rng(26);
  for (int k = 0; k < 6; ++k) {
    const auto r = random_density_matrix(2 + k % 3, rng);
    const auto res = coherence_of_formation(r, roof(4, k));
    EXPECT_NEAR(res.value, res.ensemble.average_coherence(), 1e-9);
    EXPECT_LE((res.ensemble.state().matrix() - r.matrix()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(static_cast<int>(res.ensemble.size()), r.dim() * r.dim());
    EXPECT_GE(res.value, relative_entropy_of_coherence(r) - 1e-7);
    EXPECT_EQ(res.restart_values.size(), 4u);
  }
}

TEST(CoherenceOfFormation, Deterministic) {
  Rng rng(27);
  const auto r = random_density_matrix(3, rng);
  const auto a = coherence_of_formation(r, roof(3, 9));
  const auto b = coherence_of_formation(r, roof(3, 9));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.restart_values, b.restart_values);
}

TEST(CoherenceOfFormation, QubitRandomStates) {
  Rng rng(28);
  for (int k = 0; k < 10; ++k) {
    const auto r = random_density_matrix(2, rng);
    EXPECT_NEAR(coherence_of_formation(r, roof(6, k)).value, qubit_coherence_of_formation(r), kRoofSlack);
  }
}

TEST(CoherenceOfFormation, Convexity) {
  Rng rng(29);
  for (int k = 0; k < 4; ++k) {
    const auto a = random_density_matrix(2, rng);
    const auto b = random_density_matrix(2, rng);
    const double lam = rng.uniform();
    const DensityMatrix mix(lam * a.matrix() + (1.0 - lam) * b.matrix());
    const double lhs = coherence_of_formation(mix, roof(6, k)).value;
    const double rhs = lam * coherence_of_formation(a, roof(6, k)).value +
                       (1.0 - lam) * coherence_of_formation(b, roof(6, k)).value;
    EXPECT_LE(lhs, rhs + 1e-6);
  }
}

TEST(CoherenceOfFormation, MonotoneUnderStrictlyIncoherentChannels) {
  Rng rng(30);
  for (int k = 0; k < 4; ++k) {
    const int d = 2 + k % 2;
    const auto r = random_density_matrix(d, rng);
    const auto out = apply_channel(random_strictly_incoherent_channel(d, rng), r);
    EXPECT_LE(coherence_of_formation(out, roof(6, k)).value, coherence_of_formation(r, roof(6, k)).value + kRoofSlack);
  }
}

TEST(ContinuityBounds, FrozenValues) {
  EXPECT_EQ(cr_continuity_bound(2, 0.0), 0.0);
  EXPECT_NEAR(cr_continuity_bound(4, 0.1), 0.7727939142319125, 1e-12);
  EXPECT_NEAR(cr_continuity_bound(2, 1.0), 3.0, 1e-12);
  EXPECT_EQ(cf_continuity_bound(2, 0.0), 0.0);
  EXPECT_NEAR(cf_continuity_bound(2, 1.0), 3.0, 1e-12);
  EXPECT_NEAR(cf_continuity_bound(8, 0.05), 0.4400051990303361, 1e-12);
}

TEST(ContinuityBounds, Domain) {
  EXPECT_THROW(cr_continuity_bound(1, 0.1), DomainError);
  EXPECT_THROW(cr_continuity_bound(2, -0.1), DomainError);
  EXPECT_THROW(cr_continuity_bound(2, 1.5), DomainError);
  EXPECT_THROW(cf_continuity_bound(2, 1.5), DomainError);
  EXPECT_THROW(cf_continuity_bound(0, 0.5), DomainError);
}

TEST(ConversionRateBounds, Examples) {
  const auto phi2 = DensityMatrix::from_pure(maximally_coherent(2));
  const auto phi4 = DensityMatrix::from_pure(maximally_coherent(4));
  const auto b = conversion_rate_bounds(phi4, phi2, roof(2));
  EXPECT_NEAR(b.lower, 2.0, 1e-9);
  EXPECT_NEAR(b.upper, 2.0, 1e-9);

  const auto psi = DensityMatrix::from_pure(skewed(0.9));
  const auto pure = conversion_rate_bounds(phi2, psi, roof(2));
  EXPECT_NEAR(pure.lower, 1.0 / kH09, 1e-9);
  EXPECT_NEAR(pure.upper, 1.0 / kH09, 1e-9);

  // Into the mixed qubit both bounds are 1 / C_f: the C_f ratio is the
  // smaller of the two upper candidates (1 / C_r = 3.596... is the other).
  const auto into = conversion_rate_bounds(phi2, qubit_mixed(), roof(8, 1));
  EXPECT_NEAR(into.lower, 2.132216194926005, 1e-6);
  EXPECT_NEAR(into.upper, 2.132216194926005, 1e-6);
  EXPECT_NEAR(1.0 / relative_entropy_of_coherence(qubit_mixed()), 3.596192141722959, 1e-12);
  EXPECT_LE(into.lower, into.upper + 1e-9);

  const auto from = conversion_rate_bounds(qubit_mixed(), phi2, roof(8, 1));
  EXPECT_NEAR(from.lower, kCrQubit, 1e-9);
  EXPECT_NEAR(from.upper, kCrQubit, 1e-9);
}

TEST(ConversionRateBounds, IncoherentTargetIsUndefined) {
  const std::vector<double> p{0.5, 0.5};
  EXPECT_THROW(conversion_rate_bounds(qubit_mixed(), DensityMatrix::diagonal(p), roof(2)), UndefinedRate);
}

}  // namespace
}  // namespace cohkit
