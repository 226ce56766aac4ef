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

#include "cohkit/incoherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace cohkit {
namespace {

constexpr double kClassifyZero = 1e-12;
constexpr double kOffBlockZero = 1e-10;
constexpr double kBirkhoffZero = 1e-12;

std::vector<int> descending_order(const std::vector<double>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(b)];
  });
  return order;
}

void validate_probability(std::vector<double>& p, const char* name) {
  double sum = 0.0;
  for (double& x : p) {
    if (!std::isfinite(x) || x < -tol::kKrausZero) {
      throw DomainError(std::string("majorization_check: ") + name + " has a negative entry");
    }
    x = std::max(x, 0.0);
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol::kProbabilitySum) {
    throw DomainError(std::string("majorization_check: ") + name + " sums to " +
                      std::to_string(sum));
  }
}

// Minimum-cost perfect assignment (Hungarian method with potentials).
// Returns assignment[row] = column.
std::vector<int> min_cost_assignment(const RealMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(n + 1), 0);  // column -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const int r0 = match[static_cast<std::size_t>(col0)];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[static_cast<std::size_t>(c)]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[static_cast<std::size_t>(r0)] -
                           v[static_cast<std::size_t>(c)];
        if (cur < minv[static_cast<std::size_t>(c)]) {
          minv[static_cast<std::size_t>(c)] = cur;
          way[static_cast<std::size_t>(c)] = col0;
        }
        if (minv[static_cast<std::size_t>(c)] < delta) {
          delta = minv[static_cast<std::size_t>(c)];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[static_cast<std::size_t>(c)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(c)])] += delta;
          v[static_cast<std::size_t>(c)] -= delta;
        } else {
          minv[static_cast<std::size_t>(c)] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const int col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int c = 1; c <= n; ++c) {
    assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(c)] - 1)] = c - 1;
  }
  return assignment;
}

// Output blocks touched by the columns of K inside one input block.
std::set<int> touched_blocks(const Matrix& k, const std::vector<int>& in_block,
                             const BasisPartition& out) {
  std::set<int> touched;
  for (int c : in_block) {
    for (int r = 0; r < k.rows(); ++r) {
      if (std::abs(k(r, c)) > kClassifyZero) touched.insert(out.block_of(r));
    }
  }
  return touched;
}

struct KrausIncoherence {
  bool incoherent = true;
  bool strict = true;
};

KrausIncoherence kraus_incoherence(const Matrix& k, const BasisPartition& in,
                                   const BasisPartition& out) {
  KrausIncoherence r;
  std::set<int> images;
  for (const auto& block : in.blocks()) {
    const auto touched = touched_blocks(k, block, out);
    if (touched.size() > 1) return {false, false};
    if (touched.size() == 1 && !images.insert(*touched.begin()).second) r.strict = false;
  }
  return r;
}

bool is_non_coherence_generating(const IncoherentChannel& ch, const BasisPartition& in,
                                 const BasisPartition& out) {
  // T maps Delta into Delta iff the image of every matrix unit |a><b| with
  // a, b in a common input block is block diagonal on the output side.
  for (const auto& block : in.blocks()) {
    for (std::size_t x = 0; x < block.size(); ++x) {
      for (std::size_t y = x; y < block.size(); ++y) {
        Matrix img = Matrix::Zero(ch.dim_out(), ch.dim_out());
        for (const auto& k : ch.kraus()) {
          img += k.matrix().col(block[x]) * k.matrix().col(block[y]).adjoint();
        }
        for (int r = 0; r < ch.dim_out(); ++r) {
          for (int c = 0; c < ch.dim_out(); ++c) {
            if (out.block_of(r) != out.block_of(c) && std::abs(img(r, c)) > kOffBlockZero) {
              return false;
            }
          }
        }
      }
    }
  }
  return true;
}

DensityMatrix renormalized(Matrix m) {
  const double tr = m.trace().real();
  if (tr > 0.0 && std::abs(tr - 1.0) <= tol::kCompleteness * static_cast<double>(m.rows())) {
    m /= tr;
  }
  return DensityMatrix(m);
}

}  // namespace

// ---------------------------------------------------------------------------
// KrausOperator

KrausOperator::KrausOperator(Matrix entries) : m_(std::move(entries)), cert_(certify(m_)) {}

KrausOperator::KrausOperator(Matrix entries, IncoherenceCertificate certificate)
    : m_(std::move(entries)) {
  if (certificate.j.size() != static_cast<std::size_t>(m_.cols()) ||
      certificate.c.size() != certificate.j.size()) {
    throw InvariantViolation("incoherent certificate", "certificate length differs from column count");
  }
  for (int col = 0; col < m_.cols(); ++col) {
    const int j = certificate.j[static_cast<std::size_t>(col)];
    if (j >= m_.rows()) throw InvariantViolation("incoherent certificate", "row index out of range");
    for (int row = 0; row < m_.rows(); ++row) {
      if (row != j && std::abs(m_(row, col)) > tol::kKrausZero) {
        throw InvariantViolation("incoherent certificate",
                                 "column " + std::to_string(col) + " has an entry off j(i)");
      }
    }
  }
  cert_ = std::move(certificate);
}

std::optional<IncoherenceCertificate> KrausOperator::certify(const Matrix& m, double tolerance) {
  IncoherenceCertificate cert;
  cert.j.assign(static_cast<std::size_t>(m.cols()), -1);
  cert.c.assign(static_cast<std::size_t>(m.cols()), Complex(0.0));
  for (int col = 0; col < m.cols(); ++col) {
    for (int row = 0; row < m.rows(); ++row) {
      if (std::abs(m(row, col)) <= tolerance) continue;
      if (cert.j[static_cast<std::size_t>(col)] != -1) return std::nullopt;
      cert.j[static_cast<std::size_t>(col)] = row;
      cert.c[static_cast<std::size_t>(col)] = m(row, col);
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// IncoherentChannel

std::string_view to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::strictly_incoherent: return "strictly_incoherent";
    case ChannelClass::incoherent: return "incoherent";
    case ChannelClass::non_coherence_generating: return "non_coherence_generating";
    case ChannelClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

ChannelClass channel_class_from_string(std::string_view s) {
  for (auto c : {ChannelClass::strictly_incoherent, ChannelClass::incoherent,
                 ChannelClass::non_coherence_generating, ChannelClass::unclassified}) {
    if (to_string(c) == s) return c;
  }
  throw DomainError("unknown channel class '" + std::string(s) + "'");
}

IncoherentChannel::IncoherentChannel(std::vector<KrausOperator> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvariantViolation("completeness", "channel has no Kraus operators");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  for (const auto& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      throw DimensionMismatch("IncoherentChannel: Kraus operators have differing shapes");
    }
  }
  const double err = completeness_error();
  if (err > tol::kCompleteness) {
    throw InvariantViolation("completeness", "max |sum K^dagger K - 1| = " + std::to_string(err));
  }
  label_ = classify_channel(*this);
}

double IncoherentChannel::completeness_error() const {
  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) sum += k.matrix().adjoint() * k.matrix();
  return (sum - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
}

IncoherentChannel identity_channel(int dim) {
  return IncoherentChannel({KrausOperator(Matrix::Identity(dim, dim))});
}

IncoherentChannel unitary_channel(const Matrix& u) { return IncoherentChannel({KrausOperator(u)}); }

IncoherentChannel dephasing_channel(const BasisPartition& partition) {
  std::vector<KrausOperator> kraus;
  for (const auto& block : partition.blocks()) {
    Matrix p = Matrix::Zero(partition.dim(), partition.dim());
    for (int i : block) p(i, i) = 1.0;
    kraus.emplace_back(std::move(p));
  }
  return IncoherentChannel(std::move(kraus));
}

Matrix cnot_unitary(int d) {
  Matrix u = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) u(i * d + (i + j) % d, i * d + j) = 1.0;
  }
  return u;
}

ChannelClass classify_channel(const IncoherentChannel& ch, const BasisPartition& partition) {
  if (partition.dim() != ch.dim_in()) {
    throw DimensionMismatch("classify_channel: partition dimension differs from channel input");
  }
  if (ch.completeness_error() > tol::kCompleteness) {
    throw InvariantViolation("completeness", "channel is not trace preserving");
  }
  const BasisPartition out =
      ch.dim_out() == ch.dim_in() ? partition : BasisPartition::singletons(ch.dim_out());
  bool all_incoherent = true;
  bool all_strict = true;
  for (const auto& k : ch.kraus()) {
    const auto r = kraus_incoherence(k.matrix(), partition, out);
    all_incoherent = all_incoherent && r.incoherent;
    all_strict = all_strict && r.strict && r.incoherent;
  }
  if (all_strict) return ChannelClass::strictly_incoherent;
  if (all_incoherent) return ChannelClass::incoherent;
  if (is_non_coherence_generating(ch, partition, out)) return ChannelClass::non_coherence_generating;
  return ChannelClass::unclassified;
}

ChannelClass classify_channel(const IncoherentChannel& ch) {
  return classify_channel(ch, BasisPartition::singletons(ch.dim_in()));
}

DensityMatrix apply_channel(const IncoherentChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionMismatch("apply_channel: state dimension " + std::to_string(rho.dim()) +
                            " differs from channel input " + std::to_string(ch.dim_in()));
  }
  Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out += k.matrix() * rho.matrix() * k.matrix().adjoint();
  return renormalized(std::move(out));
}

std::vector<SelectiveOutcome> apply_selective(const IncoherentChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionMismatch("apply_selective: state dimension " + std::to_string(rho.dim()) +
                            " differs from channel input " + std::to_string(ch.dim_in()));
  }
  std::vector<SelectiveOutcome> outcomes;
  for (std::size_t l = 0; l < ch.size(); ++l) {
    const Matrix& k = ch.kraus()[l].matrix();
    Matrix m = k * rho.matrix() * k.adjoint();
    const double p = m.trace().real();
    if (p < tol::kOutcomeDrop) continue;
    outcomes.push_back({l, p, DensityMatrix(m / p)});
  }
  return outcomes;
}

// ---------------------------------------------------------------------------
// Majorization

MajorizationWitness majorization_check(std::vector<double> p, std::vector<double> q) {
  validate_probability(p, "p");
  validate_probability(q, "q");
  const std::size_t d = std::max(p.size(), q.size());
  p.resize(d, 0.0);
  q.resize(d, 0.0);

  MajorizationWitness w;
  const auto order_p = descending_order(p);
  const auto order_q = descending_order(q);
  w.source_spectrum.resize(d);
  w.target_spectrum.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    w.source_spectrum[k] = p[static_cast<std::size_t>(order_p[k])];
    w.target_spectrum[k] = q[static_cast<std::size_t>(order_q[k])];
  }

  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t t = 0; t + 1 < d; ++t) {
    sp += w.source_spectrum[t];
    sq += w.target_spectrum[t];
    if (sp < sq - tol::kMajorization) {
      w.holds = false;
      w.first_violation = static_cast<int>(t + 1);
      w.violation = sq - sp;
      return w;
    }
  }
  w.holds = true;

  const auto n = static_cast<Eigen::Index>(d);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < d; ++i) max_diff = std::max(max_diff, std::abs(p[i] - q[i]));
  if (max_diff <= 1e-13) {
    w.bistochastic = RealMatrix::Identity(n, n);
    std::vector<int> id(d);
    std::iota(id.begin(), id.end(), 0);
    w.birkhoff = {{1.0, id}};
    return w;
  }

  // Chain of T-transforms on the sorted spectra: x <- ((1-t) I + t Q_jk) x
  // with j the last index where x exceeds y and k the first index after j
  // where x falls short. Each step equalizes one coordinate; x stays sorted.
  RealVector x(n), y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    x(k) = w.source_spectrum[static_cast<std::size_t>(k)];
    y(k) = w.target_spectrum[static_cast<std::size_t>(k)];
  }
  RealMatrix ds = RealMatrix::Identity(n, n);
  constexpr double eps = 1e-15;
  for (Eigen::Index iter = 0; iter < 2 * n + 2; ++iter) {
    Eigen::Index j = -1;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (x(i) > y(i) + eps) {
        j = i;
        break;
      }
    }
    if (j < 0) break;
    Eigen::Index k = -1;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (x(i) < y(i) - eps) {
        k = i;
        break;
      }
    }
    if (k < 0 || x(j) - x(k) <= 0.0) break;
    const double delta = std::min(x(j) - y(j), y(k) - x(k));
    const double t = delta / (x(j) - x(k));
    RealMatrix tr = RealMatrix::Identity(n, n);
    tr(j, j) = 1.0 - t;
    tr(k, k) = 1.0 - t;
    tr(j, k) = t;
    tr(k, j) = t;
    x = tr * x;
    ds = tr * ds;
  }

  RealMatrix dmat = RealMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      dmat(order_q[static_cast<std::size_t>(a)], order_p[static_cast<std::size_t>(b)]) = ds(a, b);
    }
  }
  w.birkhoff = birkhoff_decomposition(dmat);
  w.bistochastic = std::move(dmat);
  return w;
}

std::vector<BirkhoffTerm> birkhoff_decomposition(const RealMatrix& doubly_stochastic) {
  const auto n = doubly_stochastic.rows();
  if (n == 0 || doubly_stochastic.cols() != n) {
    throw DomainError("birkhoff_decomposition: matrix must be square and nonempty");
  }
  RealMatrix r = doubly_stochastic;
  r = r.unaryExpr([](double v) { return v <= kBirkhoffZero ? 0.0 : v; });
  std::vector<BirkhoffTerm> terms;
  const auto max_terms = n * n;
  while (r.maxCoeff() > kBirkhoffZero && static_cast<Eigen::Index>(terms.size()) < max_terms) {
    RealMatrix cost(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = r(i, j) > 0.0 ? -r(i, j) : 1e6;
    }
    const auto perm = min_cost_assignment(cost);
    double lambda = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) lambda = std::min(lambda, r(i, perm[static_cast<std::size_t>(i)]));
    if (!(lambda > 0.0)) break;  // residual has no perfect matching left: rounding dust
    for (Eigen::Index i = 0; i < n; ++i) {
      double& e = r(i, perm[static_cast<std::size_t>(i)]);
      e -= lambda;
      if (e <= kBirkhoffZero) e = 0.0;
    }
    terms.push_back({lambda, perm});
  }
  return terms;
}

// ---------------------------------------------------------------------------
// Synthesis

SynthesisResult synthesize_pure_transformation(const PureState& source, const PureState& target) {
  if (source.dim() != target.dim()) {
    throw DimensionMismatch("synthesize_pure_transformation: source and target dimensions differ");
  }
  const int d = source.dim();
  const auto q = source.populations();
  const auto p = target.populations();
  MajorizationWitness witness = majorization_check(p, q);
  if (!witness.holds) {
    throw TransformationImpossible(
        "target diagonal does not majorize source diagonal (partial sum " +
            std::to_string(witness.first_violation) + " short by " +
            std::to_string(witness.violation) + ")",
        std::move(witness));
  }

  RealVector theta = RealVector::Zero(d);
  RealVector phi = RealVector::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(source[i]) > 0.0) theta(i) = std::arg(source[i]);
    if (std::abs(target[i]) > 0.0) phi(i) = std::arg(target[i]);
  }

  // Column normalizers c_i = sum_pi lambda_pi p_pi(i); equal to q_i up to
  // rounding, and using them makes completeness exact.
  std::vector<double> col(static_cast<std::size_t>(d), 0.0);
  for (const auto& term : witness.birkhoff) {
    for (int i = 0; i < d; ++i) {
      col[static_cast<std::size_t>(i)] +=
          term.weight * p[static_cast<std::size_t>(term.perm[static_cast<std::size_t>(i)])];
    }
  }

  std::vector<KrausOperator> kraus;
  for (const auto& term : witness.birkhoff) {
    Matrix k = Matrix::Zero(d, d);
    IncoherenceCertificate cert;
    cert.j.assign(static_cast<std::size_t>(d), -1);
    cert.c.assign(static_cast<std::size_t>(d), Complex(0.0));
    bool nonzero = false;
    for (int i = 0; i < d; ++i) {
      const double ci = col[static_cast<std::size_t>(i)];
      const int row = term.perm[static_cast<std::size_t>(i)];
      const double pr = p[static_cast<std::size_t>(row)];
      if (!(ci > 0.0) || !(pr > 0.0)) continue;
      const double mag = std::sqrt(term.weight) * std::sqrt(pr / ci);
      const Complex entry = std::polar(mag, phi(row) - theta(i));
      k(row, i) = entry;
      cert.j[static_cast<std::size_t>(i)] = row;
      cert.c[static_cast<std::size_t>(i)] = entry;
      nonzero = true;
    }
    if (nonzero) kraus.emplace_back(std::move(k), std::move(cert));
  }
  // Columns outside the working support (c_i = 0) get the identity.
  Matrix null = Matrix::Zero(d, d);
  bool any_null = false;
  for (int i = 0; i < d; ++i) {
    if (!(col[static_cast<std::size_t>(i)] > 0.0)) {
      null(i, i) = 1.0;
      any_null = true;
    }
  }
  if (any_null) kraus.emplace_back(std::move(null));

  return {IncoherentChannel(std::move(kraus)), std::move(witness), theta, phi};
}

IncoherentChannel generate_from_maximally_coherent(const DensityMatrix& target) {
  const int d = target.dim();
  if (d == 1) return identity_channel(1);
  const PureState phi_d = maximally_coherent(d);
  const Spectrum s = block_spectrum(target.matrix());
  double total = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) > tol::kOutcomeDrop) total += s.values(k);
  }
  std::vector<KrausOperator> kraus;
  for (Eigen::Index k = s.values.size() - 1; k >= 0; --k) {
    const double mu = s.values(k);
    if (mu <= tol::kOutcomeDrop) continue;
    const PureState e = PureState::normalized(s.vectors.col(k));
    const auto part = synthesize_pure_transformation(phi_d, e);
    const double scale = std::sqrt(mu / total);
    for (const auto& kr : part.channel.kraus()) {
      if (kr.certificate()) {
        IncoherenceCertificate cert = *kr.certificate();
        for (auto& c : cert.c) c *= scale;
        kraus.emplace_back(kr.matrix() * scale, std::move(cert));
      } else {
        kraus.emplace_back(kr.matrix() * scale);
      }
    }
  }
  return IncoherentChannel(std::move(kraus));
}

PureState maximally_coherent(int d) {
  if (d < 2) throw DomainError("maximally_coherent: d must be >= 2");
  return PureState(Vector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0)));
}

DensityMatrix embed_maximally_correlated(const DensityMatrix& rho, std::size_t dim_cap) {
  const int d = rho.dim();
  const auto big = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  if (big > dim_cap) {
    throw ResourceError("embed_maximally_correlated: dimension " + std::to_string(big) +
                        " exceeds cap " + std::to_string(dim_cap));
  }
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = rho(i, j);
  }
  return DensityMatrix(m);
}

int rank_of_diagonal(const PureState& psi) {
  int r = 0;
  for (int i = 0; i < psi.dim(); ++i) {
    if (std::norm(psi[i]) > tol::kOutcomeDrop) ++r;
  }
  return r;
}

}  // namespace cohkit
