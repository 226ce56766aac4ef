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

// Incoherent Kraus machinery: channel validation and classification,
// majorization witnesses with Birkhoff decompositions, and explicit synthesis
// of pure-state transformations by strictly incoherent operations.

#ifndef COHKIT_INCOHERENT_HPP_
#define COHKIT_INCOHERENT_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "cohkit/qstate.hpp"

namespace cohkit {

namespace tol {
inline constexpr double kKrausZero = 1e-12;     // certificate zero test
inline constexpr double kCompleteness = 1e-9;   // sum K^dagger K = 1, entrywise
inline constexpr double kMajorization = 1e-10;  // per partial sum
inline constexpr double kProbabilitySum = 1e-9;
inline constexpr double kOutcomeDrop = 1e-12;
}  // namespace tol

/// K = sum_i c(i) |j(i)><i|. j[i] == -1 marks an all-zero column.
struct IncoherenceCertificate {
  std::vector<int> j;
  std::vector<Complex> c;
};

class KrausOperator {
 public:
  explicit KrausOperator(Matrix entries);
  /// Throws InvariantViolation("incoherent certificate") if `entries` has a
  /// nonzero (> 1e-12) entry off the certified positions.
  KrausOperator(Matrix entries, IncoherenceCertificate certificate);

  /// Certificate for `m` if every column has at most one entry above `tol`.
  static std::optional<IncoherenceCertificate> certify(const Matrix& m,
                                                       double tolerance = tol::kKrausZero);

  int rows() const noexcept { return static_cast<int>(m_.rows()); }
  int cols() const noexcept { return static_cast<int>(m_.cols()); }
  const Matrix& matrix() const noexcept { return m_; }
  const std::optional<IncoherenceCertificate>& certificate() const noexcept { return cert_; }

 private:
  Matrix m_;
  std::optional<IncoherenceCertificate> cert_;
};

enum class ChannelClass {
  strictly_incoherent,
  incoherent,
  non_coherence_generating,
  unclassified,
};

std::string_view to_string(ChannelClass c);
ChannelClass channel_class_from_string(std::string_view s);

/// Completely positive trace-preserving map given by Kraus operators.
/// Construction checks completeness (sum K^dagger K = 1 within 1e-9
/// entrywise) and records the classification against singleton partitions.
class IncoherentChannel {
 public:
  explicit IncoherentChannel(std::vector<KrausOperator> kraus);

  int dim_in() const noexcept { return dim_in_; }
  int dim_out() const noexcept { return dim_out_; }
  const std::vector<KrausOperator>& kraus() const noexcept { return kraus_; }
  std::size_t size() const noexcept { return kraus_.size(); }
  ChannelClass class_label() const noexcept { return label_; }
  /// max entry of |sum K^dagger K - 1|.
  double completeness_error() const;

 private:
  std::vector<KrausOperator> kraus_;
  int dim_in_ = 0;
  int dim_out_ = 0;
  ChannelClass label_ = ChannelClass::unclassified;
};

IncoherentChannel identity_channel(int dim);
IncoherentChannel unitary_channel(const Matrix& u);
/// Kraus {P_j}: the decohering map for `partition`.
IncoherentChannel dephasing_channel(const BasisPartition& partition);
/// |i, j> -> |i, (i + j) mod d> on C^d (x) C^d.
Matrix cnot_unitary(int d);

/// Tests the GIVEN Kraus representation for strict incoherence and
/// incoherence with respect to `partition` (blocks H_i mapped into single
/// output blocks, injectively for the strict class); non-coherence
/// generation is tested representation-independently on the block matrix
/// units. Output blocks use `partition` for square channels, singletons
/// otherwise.
ChannelClass classify_channel(const IncoherentChannel& ch, const BasisPartition& partition);
ChannelClass classify_channel(const IncoherentChannel& ch);

DensityMatrix apply_channel(const IncoherentChannel& ch, const DensityMatrix& rho);

struct SelectiveOutcome {
  std::size_t kraus_index = 0;
  double probability = 0.0;
  DensityMatrix state;
};
/// Outcomes p_l rho_l = K_l rho K_l^dagger; outcomes with p_l < 1e-12 dropped.
std::vector<SelectiveOutcome> apply_selective(const IncoherentChannel& ch, const DensityMatrix& rho);

/// Permutation pi with weight lambda; acts as p^pi(i) = p[pi[i]].
struct BirkhoffTerm {
  double weight = 0.0;
  std::vector<int> perm;
};

/// Result of testing p majorizes q.
///
/// source_spectrum/target_spectrum are p and q sorted non-increasingly. When
/// `holds`, `bistochastic` is a doubly stochastic D with q = D p in the
/// ORIGINAL index order and `birkhoff` decomposes it as sum lambda_pi P_pi.
/// When it fails, `first_violation` is the first t (1-based count of terms)
/// whose partial sums violate the order and `violation` the shortfall.
struct MajorizationWitness {
  bool holds = false;
  std::vector<double> source_spectrum;
  std::vector<double> target_spectrum;
  std::optional<RealMatrix> bistochastic;
  std::vector<BirkhoffTerm> birkhoff;
  int first_violation = -1;
  double violation = 0.0;
};

/// Throws DomainError for non-probability input; the shorter vector is
/// zero-padded.
MajorizationWitness majorization_check(std::vector<double> p, std::vector<double> q);

/// Greedy Birkhoff-von Neumann decomposition via maximum-weight perfect
/// matchings on the positive support.
std::vector<BirkhoffTerm> birkhoff_decomposition(const RealMatrix& doubly_stochastic);

class TransformationImpossible : public Error {
 public:
  TransformationImpossible(const std::string& what, MajorizationWitness witness)
      : Error(what), witness_(std::move(witness)) {}
  const MajorizationWitness& witness() const noexcept { return witness_; }

 private:
  MajorizationWitness witness_;
};

struct SynthesisResult {
  IncoherentChannel channel;
  MajorizationWitness witness;  // majorization_check(|target|^2, |source|^2)
  RealVector source_phases;     // arg of source amplitudes (removed first)
  RealVector target_phases;     // arg of target amplitudes (applied last)
};

/// Strictly incoherent channel taking `source` to `target` on every Kraus
/// outcome. Requires |target|^2 to majorize |source|^2; otherwise throws
/// TransformationImpossible carrying the witness.
SynthesisResult synthesize_pure_transformation(const PureState& source, const PureState& target);

/// Incoherent channel E with E(Phi_d) = target: the eigen-ensemble mixture
/// of per-eigenvector synthesis channels.
IncoherentChannel generate_from_maximally_coherent(const DensityMatrix& target);

PureState maximally_coherent(int d);

/// sum_ij rho_ij |ii><jj| on C^d (x) C^d.
DensityMatrix embed_maximally_correlated(const DensityMatrix& rho,
                                         std::size_t dim_cap = kDefaultDimCap);

/// Number of |amplitude|^2 above 1e-12.
int rank_of_diagonal(const PureState& psi);

}  // namespace cohkit

#endif  // COHKIT_INCOHERENT_HPP_
