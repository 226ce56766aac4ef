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

#include "cohkit/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace cohkit {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_same_dim(int a, int b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

double xlog2x(double x) { return x > tol::kEntropyFloor ? x * std::log2(x) : 0.0; }

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = b;
  }
  std::vector<int> parent;
};

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw InvariantViolation("square", "density matrix must be a nonempty square matrix, got " +
                                           std::to_string(entries.rows()) + "x" +
                                           std::to_string(entries.cols()));
  }
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  // The residual is checked on the raw input, then symmetrized away.
  if (asym > tol::kHermitian) {
    throw InvariantViolation("Hermitian", "max |rho_ij - conj(rho_ji)| = " + fmt(asym));
  }
  m_ = (entries + entries.adjoint()) * 0.5;
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    throw InvariantViolation("unit trace", "trace = " + fmt(tr));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol::kPsd) {
    throw InvariantViolation("positive semidefinite", "smallest eigenvalue = " + fmt(lo));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                          static_cast<Eigen::Index>(probabilities.size()));
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = probabilities[i];
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw DomainError("maximally_mixed: dim must be >= 1");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

RealVector DensityMatrix::eigenvalues() const { return spectrum(m_).values; }

double DensityMatrix::max_off_diagonal() const {
  double best = 0.0;
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      if (i != j) best = std::max(best, std::abs(m_(i, j)));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Vector amplitudes) : a_(std::move(amplitudes)) {
  if (a_.size() == 0) throw InvariantViolation("unit norm", "empty amplitude vector");
  const double n2 = a_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol::kPureNorm) {
    throw InvariantViolation("unit norm", "||psi||^2 = " + fmt(n2));
  }
}

PureState PureState::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvariantViolation("unit norm", "cannot normalize a zero or non-finite vector");
  }
  return PureState(v / n);
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw DomainError("basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(v);
}

std::vector<double> PureState::populations() const {
  std::vector<double> p(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = std::norm(a_(i));
  return p;
}

// ---------------------------------------------------------------------------
// BasisPartition

BasisPartition::BasisPartition(int dim, std::vector<std::vector<int>> blocks)
    : dim_(dim), blocks_(std::move(blocks)), owner_(static_cast<std::size_t>(std::max(dim, 0)), -1) {
  if (dim < 1) throw InvariantViolation("partition cover", "dim must be >= 1");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw InvariantViolation("partition cover", "empty block");
    for (int i : blocks_[b]) {
      if (i < 0 || i >= dim) {
        throw InvariantViolation("partition cover", "index " + std::to_string(i) + " out of range");
      }
      auto& o = owner_[static_cast<std::size_t>(i)];
      if (o != -1) {
        throw InvariantViolation("partition disjoint", "index " + std::to_string(i) +
                                                           " appears in two blocks");
      }
      o = static_cast<int>(b);
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (owner_[static_cast<std::size_t>(i)] == -1) {
      throw InvariantViolation("partition cover", "index " + std::to_string(i) + " not covered");
    }
  }
}

BasisPartition BasisPartition::singletons(int dim) {
  std::vector<std::vector<int>> blocks;
  blocks.reserve(static_cast<std::size_t>(std::max(dim, 0)));
  for (int i = 0; i < dim; ++i) blocks.push_back({i});
  return BasisPartition(dim, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Matrix functions

Spectrum spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  if (es.info() != Eigen::Success) throw Error("spectrum: eigensolver failed");
  RealVector values = es.eigenvalues();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) < -tol::kPsd) {
      throw InvariantViolation("positive semidefinite",
                               "eigenvalue " + fmt(values(k)) + " below -1e-9");
    }
    if (values(k) < 0.0) values(k) = 0.0;
  }
  return {values, es.eigenvectors()};
}

Spectrum block_spectrum(const Matrix& hermitian, double threshold) {
  const auto d = hermitian.rows();
  const BasisPartition blocks = connected_blocks(hermitian, threshold);
  std::vector<std::pair<double, Vector>> pairs;
  pairs.reserve(static_cast<std::size_t>(d));
  for (const auto& block : blocks.blocks()) {
    const auto b = static_cast<Eigen::Index>(block.size());
    Matrix sub(b, b);
    for (Eigen::Index r = 0; r < b; ++r) {
      for (Eigen::Index c = 0; c < b; ++c) {
        sub(r, c) = hermitian(block[static_cast<std::size_t>(r)], block[static_cast<std::size_t>(c)]);
      }
    }
    const Spectrum s = spectrum(sub);
    for (Eigen::Index k = 0; k < b; ++k) {
      Vector v = Vector::Zero(d);
      for (Eigen::Index r = 0; r < b; ++r) v(block[static_cast<std::size_t>(r)]) = s.vectors(r, k);
      pairs.emplace_back(s.values(k), std::move(v));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Spectrum out{RealVector(d), Matrix(d, d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = pairs[static_cast<std::size_t>(k)].first;
    out.vectors.col(k) = pairs[static_cast<std::size_t>(k)].second;
  }
  return out;
}

Matrix hermitian_sqrt(const Matrix& psd) {
  const Spectrum s = spectrum(psd);
  return s.vectors * s.values.cwiseSqrt().asDiagonal() * s.vectors.adjoint();
}

double trace_norm(const Matrix& m) {
  if (m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

// ---------------------------------------------------------------------------
// Entropies

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("binary_entropy: argument outside [0, 1]");
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector ev = rho.eigenvalues();
  double h = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) h -= xlog2x(ev(k));
  return std::max(h, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative_entropy");
  const Spectrum s = spectrum(sigma.matrix());
  double cross = 0.0;  // tr rho log2 sigma
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const auto v = s.vectors.col(k);
    const double weight = (v.adjoint() * rho.matrix() * v)(0).real();
    if (s.values(k) <= tol::kSupport) {
      if (weight > tol::kSupport) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log2(s.values(k));
  }
  const double value = -von_neumann_entropy(rho) - cross;
  return std::max(value, 0.0);
}

// ---------------------------------------------------------------------------
// Dephasing

DensityMatrix dephase(const DensityMatrix& rho, const BasisPartition& partition) {
  require_same_dim(rho.dim(), partition.dim(), "dephase");
  Matrix out = rho.matrix();
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      if (partition.block_of(i) != partition.block_of(j)) out(i, j) = 0.0;
    }
  }
  return DensityMatrix(out);
}

DensityMatrix dephase(const DensityMatrix& rho) {
  return dephase(rho, BasisPartition::singletons(rho.dim()));
}

BasisPartition connected_blocks(const Matrix& m, double threshold) {
  const int d = static_cast<int>(m.rows());
  UnionFind uf(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (std::abs(m(i, j)) > threshold || std::abs(m(j, i)) > threshold) uf.unite(i, j);
    }
  }
  // Blocks ordered by smallest member; members ascending.
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(static_cast<std::size_t>(d), -1);
  for (int i = 0; i < d; ++i) {
    const int root = uf.find(i);
    auto& s = slot[static_cast<std::size_t>(root)];
    if (s == -1) {
      s = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(s)].push_back(i);
  }
  return BasisPartition(d, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Distances

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "fidelity");
  // tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the nuclear norm of
  // sqrt(rho) sqrt(sigma); the SVD route keeps tiny singular values accurate.
  const Matrix prod = hermitian_sqrt(rho.matrix()) * hermitian_sqrt(sigma.matrix());
  Eigen::BDCSVD<Matrix> svd(prod);
  return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "trace_distance");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

DistanceReport distances(const DensityMatrix& rho, const DensityMatrix& sigma) {
  DistanceReport r;
  r.fidelity = fidelity(rho, sigma);
  r.trace_distance = trace_distance(rho, sigma);
  r.bures = std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - r.fidelity));
  return r;
}

// ---------------------------------------------------------------------------
// Composition

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& rho, const DensityMatrix& sigma, std::size_t dim_cap) {
  const auto d = static_cast<std::size_t>(rho.dim()) * static_cast<std::size_t>(sigma.dim());
  if (d > dim_cap) {
    throw ResourceError("tensor: product dimension " + std::to_string(d) + " exceeds cap " +
                        std::to_string(dim_cap));
  }
  return DensityMatrix(kron(rho.matrix(), sigma.matrix()));
}

PureState tensor(const PureState& a, const PureState& b, std::size_t dim_cap) {
  const auto d = static_cast<std::size_t>(a.dim()) * static_cast<std::size_t>(b.dim());
  if (d > dim_cap) {
    throw ResourceError("tensor: product dimension " + std::to_string(d) + " exceeds cap " +
                        std::to_string(dim_cap));
  }
  Vector v(static_cast<Eigen::Index>(d));
  for (int i = 0; i < a.dim(); ++i) v.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
  return PureState::normalized(v);
}

}  // namespace cohkit
