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

// State representations, matrix functions, entropies, distances and the
// decohering (pinching) map. All logarithms are base 2.

#ifndef COHKIT_QSTATE_HPP_
#define COHKIT_QSTATE_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cohkit/errors.hpp"

namespace cohkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;   // per entry, absolute
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-9;          // most negative eigenvalue allowed
inline constexpr double kPureNorm = 1e-12;
inline constexpr double kEntropyFloor = 1e-12;
inline constexpr double kSupport = 1e-10;
}  // namespace tol

inline constexpr std::size_t kDefaultDimCap = 4096;

class PureState;

/// Unit-trace positive semidefinite Hermitian matrix.
///
/// The constructor symmetrizes its input, (M + M^dagger)/2, and then checks
/// the invariants; a failing check throws InvariantViolation naming it. Once
/// constructed the value is immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& entries);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix diagonal(std::span<const double> probabilities);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  /// Eigenvalues in ascending order, negatives in [-kPsd, 0) clamped to 0.
  RealVector eigenvalues() const;
  /// Largest |rho_ij| over i != j.
  double max_off_diagonal() const;
  bool is_diagonal(double tolerance) const { return max_off_diagonal() <= tolerance; }

 private:
  Matrix m_;
};

/// Unit-norm amplitude vector in the incoherent basis.
class PureState {
 public:
  /// Throws InvariantViolation("unit norm") unless | |a|^2 - 1 | <= 1e-12.
  explicit PureState(Vector amplitudes);
  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(const Vector& v);
  static PureState basis(int dim, int index);

  int dim() const noexcept { return static_cast<int>(a_.size()); }
  const Vector& amplitudes() const noexcept { return a_; }
  Complex operator[](int i) const { return a_(i); }
  /// |amplitude_i|^2, the diagonal of the projector.
  std::vector<double> populations() const;

 private:
  Vector a_;
};

/// Disjoint index blocks covering {0, ..., dim-1}.
class BasisPartition {
 public:
  BasisPartition(int dim, std::vector<std::vector<int>> blocks);
  static BasisPartition singletons(int dim);

  int dim() const noexcept { return dim_; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  /// Index of the block containing basis index i.
  int block_of(int i) const { return owner_[static_cast<std::size_t>(i)]; }
  bool is_singletons() const noexcept { return static_cast<int>(blocks_.size()) == dim_; }

 private:
  int dim_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> owner_;
};

struct DistanceReport {
  double fidelity = 0.0;        // tr sqrt(sqrt(rho) sigma sqrt(rho))
  double trace_distance = 0.0;  // (1/2) ||rho - sigma||_1
  double bures = 0.0;           // sqrt(2) sqrt(1 - F)
};

struct Spectrum {
  RealVector values;  // ascending, clamped
  Matrix vectors;     // columns are eigenvectors
};

// ---------------------------------------------------------------------------
// Matrix functions on Hermitian input via eigendecomposition.

/// Hermitian eigendecomposition; eigenvalues in [-kPsd, 0) are clamped to 0,
/// anything more negative throws InvariantViolation("positive semidefinite").
Spectrum spectrum(const Matrix& hermitian);
/// Eigendecomposition done separately on each connected block of the
/// support graph |m_ij| > threshold, so eigenvectors never straddle blocks.
Spectrum block_spectrum(const Matrix& hermitian, double threshold = 1e-10);
Matrix hermitian_sqrt(const Matrix& psd);
double trace_norm(const Matrix& m);

// ---------------------------------------------------------------------------
// Entropies (bits).

double binary_entropy(double x);
/// -sum p log2 p, terms with p <= 1e-12 dropped.
double shannon_entropy(std::span<const double> p);
double von_neumann_entropy(const DensityMatrix& rho);
/// S(rho || sigma); +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// ---------------------------------------------------------------------------
// Decohering map and composition.

/// sum_j P_j rho P_j.
DensityMatrix dephase(const DensityMatrix& rho, const BasisPartition& partition);
DensityMatrix dephase(const DensityMatrix& rho);

/// Connected components of the graph on basis indices with an edge (i, i')
/// whenever |m_ii'| > threshold.
BasisPartition connected_blocks(const Matrix& m, double threshold);

DistanceReport distances(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Kronecker product; throws ResourceError when the product dimension
/// exceeds `dim_cap`.
DensityMatrix tensor(const DensityMatrix& rho, const DensityMatrix& sigma,
                     std::size_t dim_cap = kDefaultDimCap);
PureState tensor(const PureState& a, const PureState& b, std::size_t dim_cap = kDefaultDimCap);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace cohkit

#endif  // COHKIT_QSTATE_HPP_
