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

const double kR = 1.0 / std::sqrt(2.0);

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix hadamard() { return mat2(kR, kR, kR, -kR); }

IncoherentChannel channel(std::initializer_list<Matrix> ks) {
  std::vector<KrausOperator> v;
  for (const auto& k : ks) v.emplace_back(k);
  return IncoherentChannel(std::move(v));
}

PureState amplitudes2(double a, double b) {
  Vector v(2);
  v << a, b;
  return PureState(v);
}

TEST(Kraus, Certificate) {
  const auto cert = KrausOperator::certify(mat2(0, 2, 3, 0));
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->j, (std::vector<int>{1, 0}));
  EXPECT_FALSE(KrausOperator::certify(hadamard()).has_value());
  EXPECT_THROW(KrausOperator(mat2(1, 0, 1, 0), IncoherenceCertificate{{0, 0}, {1.0, 0.0}}), InvariantViolation);
}

TEST(Channel, CompletenessEnforced) {
  EXPECT_THROW(channel({mat2(1, 0, 0, 0)}), InvariantViolation);
  EXPECT_NO_THROW(channel({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1)}));
}

TEST(Classify, Cnot) {
  const auto ch = unitary_channel(cnot_unitary(2));
  EXPECT_EQ(classify_channel(ch, BasisPartition::singletons(4)), ChannelClass::strictly_incoherent);
}

TEST(Classify, Hadamard) {
  EXPECT_EQ(classify_channel(unitary_channel(hadamard())), ChannelClass::unclassified);
  // Inside one block the Hadamard creates no block coherence.
  EXPECT_EQ(classify_channel(unitary_channel(hadamard()), BasisPartition(2, {{0, 1}})),
            ChannelClass::strictly_incoherent);
}

TEST(Classify, ColumnIncoherentButAdjointNot) {
  // {|0><+|, |1><-|}: every column has a single nonzero, the adjoints do not.
  const auto ch = channel({mat2(kR, kR, 0, 0), mat2(0, 0, kR, -kR)});
  EXPECT_EQ(classify_channel(ch), ChannelClass::incoherent);
}

TEST(Classify, NonCoherenceGeneratingOnly) {
  // H/sqrt2 with (|0><+| - |1><->)/sqrt2 sends every |i><i| to I/2 but the
  // first Kraus operator is coherent.
  const auto ch = channel({hadamard() * kR, mat2(kR, kR, -kR, kR) * kR});
  EXPECT_EQ(classify_channel(ch), ChannelClass::non_coherence_generating);
}

TEST(Classify, DephasingIsStrict) {
  EXPECT_EQ(classify_channel(dephasing_channel(BasisPartition::singletons(3))), ChannelClass::strictly_incoherent);
  EXPECT_EQ(classify_channel(identity_channel(3)), ChannelClass::strictly_incoherent);
}

TEST(Classify, LabelNames) {
  for (auto c : {ChannelClass::strictly_incoherent, ChannelClass::incoherent, ChannelClass::non_coherence_generating,
                 ChannelClass::unclassified}) {
    EXPECT_EQ(channel_class_from_string(to_string(c)), c);
  }
}

TEST(Apply, Examples) {
  Rng rng(31);
  const auto r = random_density_matrix(3, rng);
  EXPECT_LE((apply_channel(identity_channel(3), r).matrix() - r.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((apply_channel(dephasing_channel(BasisPartition::singletons(3)), r).matrix() - dephase(r).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);

  const auto q = random_density_matrix(2, rng);
  const auto zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  const auto out = apply_channel(unitary_channel(cnot_unitary(2)), tensor(q, zero));
  EXPECT_LE((out.matrix() - embed_maximally_correlated(q).matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(apply_channel(identity_channel(2), r), DimensionMismatch);
}

TEST(Apply, Selective) {
  const auto phi = DensityMatrix::from_pure(maximally_coherent(2));
  const auto outs = apply_selective(dephasing_channel(BasisPartition::singletons(2)), phi);
  ASSERT_EQ(outs.size(), 2u);
  for (int l = 0; l < 2; ++l) {
    EXPECT_NEAR(outs[l].probability, 0.5, 1e-15);
    EXPECT_NEAR(outs[l].state(l, l).real(), 1.0, 1e-15);
  }
  const auto id = apply_selective(identity_channel(2), phi);
  ASSERT_EQ(id.size(), 1u);
  EXPECT_NEAR(id[0].probability, 1.0, 1e-15);
}

TEST(Apply, IncoherentChannelsPreserveIncoherence) {
  Rng rng(32);
  for (int k = 0; k < 40; ++k) {
    const int d = 2 + k % 5;
    const auto ch = random_incoherent_channel(d, rng);
    const auto diag = DensityMatrix::diagonal(random_probability(d, rng));
    EXPECT_LE(apply_channel(ch, diag).max_off_diagonal(), 1e-10);
    double sum = 0.0;
    for (const auto& o : apply_selective(ch, diag)) {
      EXPECT_LE(o.state.max_off_diagonal(), 1e-10);
      sum += o.probability;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Majorization, Examples) {
  const auto w = majorization_check({0.7, 0.3}, {0.5, 0.5});
  ASSERT_TRUE(w.holds);
  ASSERT_EQ(w.birkhoff.size(), 2u);
  for (const auto& t : w.birkhoff) EXPECT_NEAR(t.weight, 0.5, 1e-12);

  const auto no = majorization_check({0.5, 0.5}, {0.7, 0.3});
  EXPECT_FALSE(no.holds);
  EXPECT_FALSE(no.bistochastic.has_value());
  EXPECT_EQ(no.first_violation, 1);
  EXPECT_NEAR(no.violation, 0.2, 1e-12);

  const auto same = majorization_check({0.2, 0.5, 0.3}, {0.2, 0.5, 0.3});
  ASSERT_TRUE(same.holds);
  ASSERT_EQ(same.birkhoff.size(), 1u);
  EXPECT_NEAR(same.birkhoff[0].weight, 1.0, 1e-12);
  EXPECT_EQ(same.birkhoff[0].perm, (std::vector<int>{0, 1, 2}));
}

TEST(Majorization, PadsShorterVector) {
  EXPECT_TRUE(majorization_check({1.0}, {0.5, 0.25, 0.25}).holds);
  EXPECT_FALSE(majorization_check({0.5, 0.25, 0.25}, {1.0}).holds);
}

TEST(Majorization, RejectsNonProbability) {
  EXPECT_THROW(majorization_check({0.5, 0.6}, {0.5, 0.5}), DomainError);
  EXPECT_THROW(majorization_check({1.5, -0.5}, {0.5, 0.5}), DomainError);
}

TEST(Majorization, BirkhoffWitness) {
  Rng rng(33);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 7;
    const auto [src, tgt] = random_majorizing_pair(d, rng);
    const auto p = tgt.populations();
    const auto q = src.populations();
    const auto w = majorization_check(p, q);
    ASSERT_TRUE(w.holds);
    ASSERT_TRUE(w.bistochastic.has_value());
    EXPECT_LE(static_cast<int>(w.birkhoff.size()), (d - 1) * (d - 1) + 1);
    double total = 0.0;
    std::vector<double> rebuilt(d, 0.0);
    for (const auto& t : w.birkhoff) {
      total += t.weight;
      for (int i = 0; i < d; ++i) rebuilt[i] += t.weight * p[t.perm[i]];
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    for (int i = 0; i < d; ++i) EXPECT_NEAR(rebuilt[i], q[i], 1e-9);
    const RealMatrix& D = *w.bistochastic;
    EXPECT_LE((D.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9);
    EXPECT_LE((D.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9);
  }
}

TEST(Synthesis, UniformToSkewed) {
  const auto res = synthesize_pure_transformation(maximally_coherent(2), amplitudes2(std::sqrt(0.7), std::sqrt(0.3)));
  ASSERT_EQ(res.channel.size(), 2u);
  std::vector<double> mags;
  for (const auto& k : res.channel.kraus()) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (std::abs(k.matrix()(i, j)) > 1e-12) mags.push_back(std::abs(k.matrix()(i, j)));
      }
    }
    EXPECT_TRUE(k.certificate().has_value());
  }
  std::sort(mags.begin(), mags.end());
  ASSERT_EQ(mags.size(), 4u);
  EXPECT_NEAR(mags[0], std::sqrt(0.3), 1e-12);
  EXPECT_NEAR(mags[1], std::sqrt(0.3), 1e-12);
  EXPECT_NEAR(mags[2], std::sqrt(0.7), 1e-12);
  EXPECT_NEAR(mags[3], std::sqrt(0.7), 1e-12);
  EXPECT_LE(res.channel.completeness_error(), 1e-12);
}

TEST(Synthesis, IdentityForEqualStates) {
  Rng rng(34);
  const auto psi = random_pure_state(4, rng);
  const auto res = synthesize_pure_transformation(psi, psi);
  ASSERT_EQ(res.channel.size(), 1u);
  EXPECT_LE((res.channel.kraus()[0].matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Synthesis, ImpossibleCarriesWitness) {
  try {
    synthesize_pure_transformation(amplitudes2(std::sqrt(0.7), std::sqrt(0.3)), maximally_coherent(2));
    FAIL() << "expected TransformationImpossible";
  } catch (const TransformationImpossible& e) {
    EXPECT_FALSE(e.witness().holds);
    EXPECT_EQ(e.witness().first_violation, 1);
  }
}

TEST(Synthesis, RandomPairsIncludingPhasesAndZeros) {
  Rng rng(35);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 5;
    const auto [src, tgt] = random_majorizing_pair(d, rng);
    const auto res = synthesize_pure_transformation(src, tgt);
    EXPECT_LE(res.channel.completeness_error(), 1e-9);
    EXPECT_EQ(classify_channel(res.channel), ChannelClass::strictly_incoherent);
    const auto target = DensityMatrix::from_pure(tgt);
    for (const auto& o : apply_selective(res.channel, DensityMatrix::from_pure(src))) {
      EXPECT_GE(fidelity(o.state, target), 1.0 - 1e-9);
    }
  }
}

TEST(Synthesis, FromMaximallyCoherent) {
  Rng rng(36);
  for (int d = 2; d <= 5; ++d) {
    const auto psi = random_pure_state(d, rng);
    const auto res = synthesize_pure_transformation(maximally_coherent(d), psi);
    const auto out = apply_channel(res.channel, DensityMatrix::from_pure(maximally_coherent(d)));
    EXPECT_GE(fidelity(out, DensityMatrix::from_pure(psi)), 1.0 - 1e-9);
  }
}

TEST(GenerateFromMaximallyCoherent, Examples) {
  const auto phi3 = DensityMatrix::from_pure(maximally_coherent(3));
  const auto id = generate_from_maximally_coherent(phi3);
  EXPECT_GE(fidelity(apply_channel(id, phi3), phi3), 1.0 - 1e-10);

  const std::vector<double> p{0.6, 0.3, 0.1};
  const auto diag = apply_channel(generate_from_maximally_coherent(DensityMatrix::diagonal(p)), phi3);
  EXPECT_LE(diag.max_off_diagonal(), 1e-10);

  Matrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;
  const DensityMatrix q(m);
  const auto out = apply_channel(generate_from_maximally_coherent(q), DensityMatrix::from_pure(maximally_coherent(2)));
  EXPECT_LE((out.matrix() - m).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(GenerateFromMaximallyCoherent, RandomTargets) {
  Rng rng(37);
  for (int k = 0; k < 10; ++k) {
    const int d = 2 + k % 4;
    const auto target = random_density_matrix(d, rng);
    const auto ch = generate_from_maximally_coherent(target);
    EXPECT_NE(classify_channel(ch), ChannelClass::unclassified);
    const auto out = apply_channel(ch, DensityMatrix::from_pure(maximally_coherent(d)));
    EXPECT_GE(fidelity(out, target), 1.0 - 1e-8);
  }
}

TEST(MaximallyCoherent, Examples) {
  const auto p2 = maximally_coherent(2);
  EXPECT_DOUBLE_EQ(p2[0].real(), kR);
  const auto p4 = maximally_coherent(4);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(p4[i].real(), 0.5);
  EXPECT_THROW(maximally_coherent(1), DomainError);
}

TEST(Embedding, Examples) {
  const auto plus = DensityMatrix::from_pure(maximally_coherent(2));
  const auto e = embed_maximally_correlated(plus);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = kR;
  EXPECT_LE((e.matrix() - bell * bell.adjoint()).cwiseAbs().maxCoeff(), 1e-15);

  Matrix m(2, 2);
  m << 0.5, 0.3, 0.3, 0.5;
  const auto q = embed_maximally_correlated(DensityMatrix(m));
  EXPECT_DOUBLE_EQ(q(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(q(0, 3).real(), 0.3);
  EXPECT_DOUBLE_EQ(q(3, 0).real(), 0.3);
  EXPECT_DOUBLE_EQ(q(3, 3).real(), 0.5);
  EXPECT_EQ(q(1, 1), Complex(0.0));

  const std::vector<double> p{0.25, 0.75};
  EXPECT_TRUE(embed_maximally_correlated(DensityMatrix::diagonal(p)).is_diagonal(0.0));
}

TEST(Embedding, PreservesEntropyDifference) {
  Rng rng(38);
  for (int k = 0; k < 20; ++k) {
    const auto r = random_density_matrix(2 + k % 4, rng);
    const auto e = embed_maximally_correlated(r);
    EXPECT_NEAR(relative_entropy_of_coherence(r), von_neumann_entropy(dephase(e)) - von_neumann_entropy(e), 1e-8);
  }
}

TEST(RankOfDiagonal, Examples) {
  EXPECT_EQ(rank_of_diagonal(maximally_coherent(5)), 5);
  EXPECT_EQ(rank_of_diagonal(PureState::basis(3, 0)), 1);
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.9);
  v(2) = std::sqrt(0.1);
  EXPECT_EQ(rank_of_diagonal(PureState(v)), 2);
}

TEST(RankOfDiagonal, MonotoneUnderStrictlyIncoherentChannels) {
  Rng rng(39);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 5;
    Vector v = Vector::Zero(d);
    for (int i = 0; i < d; ++i) {
      if (i == 0 || rng.uniform() < 0.5) v(i) = rng.complex_normal();
    }
    const auto psi = PureState::normalized(v);
    for (const auto& o : apply_selective(random_strictly_incoherent_channel(d, rng), DensityMatrix::from_pure(psi))) {
      int rank = 0;
      for (int i = 0; i < d; ++i) rank += o.state(i, i).real() > 1e-12;
      EXPECT_LE(rank, rank_of_diagonal(psi));
    }
  }
}

}  // namespace
}  // namespace cohkit
