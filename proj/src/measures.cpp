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

#include "cohkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "cohkit/random.hpp"

namespace cohkit {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kWeightFloor = 1e-14;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Ensemble average coherence as a function of the mixing isometry U (m x r):
// rows of Z = U * At are the unnormalized members psi~_i, with
// At = [sqrt(lambda_k) e_k^T]_k (r x d). For w_ix = |Z_ix|^2, p_i = sum_x w_ix,
//   f(U) = sum_i p_i H(w_i. / p_i) = -sum_ix w_ix log w_ix + sum_i p_i log p_i.
class RoofObjective {
 public:
  explicit RoofObjective(Matrix at) : at_(std::move(at)), at_adj_(at_.adjoint()) {}

  double value(const Matrix& u) const {
    const Matrix z = u * at_;
    double f = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      double p = 0.0;
      for (Eigen::Index x = 0; x < z.cols(); ++x) {
        const double w = std::norm(z(i, x));
        p += w;
        f -= xlog2x(w);
      }
      f += xlog2x(p);
    }
    return f;
  }

  /// Riemannian gradient on the Stiefel manifold (embedded metric).
  double value_and_gradient(const Matrix& u, Matrix& grad) const {
    const Matrix z = u * at_;
    Matrix gz(z.rows(), z.cols());
    double f = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      double p = 0.0;
      for (Eigen::Index x = 0; x < z.cols(); ++x) p += std::norm(z(i, x));
      f += xlog2x(p);
      for (Eigen::Index x = 0; x < z.cols(); ++x) {
        const double w = std::norm(z(i, x));
        f -= xlog2x(w);
        gz(i, x) = (w > 0.0 && p > 0.0) ? -std::log2(w / p) * z(i, x) : Complex(0.0);
      }
    }
    const Matrix euclid = 2.0 * gz * at_adj_;
    const Matrix s = u.adjoint() * euclid;
    grad = euclid - u * (0.5 * (s + s.adjoint()));
    return f;
  }

 private:
  Matrix at_;
  Matrix at_adj_;
};

// QR retraction with column phases fixed so diag(R) > 0.
Matrix retract(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Complex rjj = qr.matrixQR()(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

struct RestartOutcome {
  double value;
  Matrix u;
};

RestartOutcome descend(const RoofObjective& obj, Matrix u, int max_iterations) {
  Matrix g;
  double f = obj.value_and_gradient(u, g);
  double step = 1.0;
  int stalled = 0;
  for (int it = 0; it < max_iterations; ++it) {
    const double g2 = g.squaredNorm();
    if (g2 < 1e-20) break;
    step = std::min(step * 2.0, 1e3);
    Matrix trial;
    double ft = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = retract(u - step * g);
      ft = obj.value(trial);
      if (ft <= f - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double drop = f - ft;
    u = std::move(trial);
    f = obj.value_and_gradient(u, g);
    stalled = drop < 1e-14 ? stalled + 1 : 0;
    if (stalled >= 20) break;
  }
  return {f, std::move(u)};
}

Matrix haar_isometry(int m, int r, Rng& rng) {
  Matrix g(m, r);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < r; ++j) g(i, j) = rng.complex_normal();
  }
  return retract(g);
}

// Members from the isometry, with negligible weights pruned and members
// equal up to phase merged.
Ensemble ensemble_from(const Matrix& z) {
  // Merging moves the state by about p (1 - |<a|b>|^2), so the test is tight.
  std::vector<Vector> vecs;  // unnormalized
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Vector v = z.row(i).transpose();
    const double p = v.squaredNorm();
    if (p <= kWeightFloor) continue;
    bool merged = false;
    for (auto& acc : vecs) {
      const Complex ov = acc.dot(v);
      if (std::norm(ov) > (1.0 - 1e-13) * acc.squaredNorm() * p) {
        // Best rank-one approximation of acc acc^dagger + v v^dagger.
        Matrix pair(acc.size(), 2);
        pair << acc, v;
        Eigen::JacobiSVD<Matrix> svd(pair, Eigen::ComputeThinU);
        acc = svd.matrixU().col(0) * svd.singularValues()(0);
        merged = true;
        break;
      }
    }
    if (!merged) vecs.push_back(v);
  }
  double total = 0.0;
  for (const auto& v : vecs) total += v.squaredNorm();
  std::vector<double> weights;
  std::vector<PureState> members;
  for (const auto& v : vecs) {
    weights.push_back(v.squaredNorm() / total);
    members.push_back(PureState::normalized(v));
  }
  return Ensemble(std::move(weights), std::move(members));
}

}  // namespace

// ---------------------------------------------------------------------------
// Ensemble

Ensemble::Ensemble(std::vector<double> weights, std::vector<PureState> members)
    : weights_(std::move(weights)), members_(std::move(members)) {
  if (weights_.empty() || weights_.size() != members_.size()) {
    throw InvariantViolation("ensemble shape", "weights and members must be nonempty and equal length");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvariantViolation("ensemble weights", "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw InvariantViolation("ensemble weights", "weights sum to " + std::to_string(sum));
  }
  for (const auto& m : members_) {
    if (m.dim() != members_.front().dim()) {
      throw DimensionMismatch("Ensemble: members have differing dimensions");
    }
  }
}

DensityMatrix Ensemble::state() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < size(); ++i) {
    m += weights_[i] * members_[i].amplitudes() * members_[i].amplitudes().adjoint();
  }
  return DensityMatrix(m);
}

double Ensemble::average_coherence() const {
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) v += weights_[i] * entropy_of_coherence(members_[i]);
  return v;
}

// ---------------------------------------------------------------------------
// Closed-form measures

double entropy_of_coherence(const PureState& psi) {
  const auto p = psi.populations();
  return shannon_entropy(p);
}

double relative_entropy_of_coherence(const DensityMatrix& rho) {
  return relative_entropy_of_coherence(rho, BasisPartition::singletons(rho.dim()));
}

double relative_entropy_of_coherence(const DensityMatrix& rho, const BasisPartition& partition) {
  const double value = von_neumann_entropy(dephase(rho, partition)) - von_neumann_entropy(rho);
  return std::max(value, 0.0);
}

double qubit_coherence_of_formation(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DomainError("qubit_coherence_of_formation: state must be a qubit");
  const double c = std::abs(rho(0, 1));
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * c * c));
  return binary_entropy(std::clamp((1.0 + root) / 2.0, 0.0, 1.0));
}

double cr_continuity_bound(int d, double eps) {
  if (d < 2) throw DomainError("cr_continuity_bound: d must be >= 2");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("cr_continuity_bound: eps outside [0, 1]");
  return eps * std::log2(static_cast<double>(d)) + 2.0 * binary_entropy(eps / 2.0);
}

double cf_continuity_bound(int d, double eps) {
  if (d < 1) throw DomainError("cf_continuity_bound: d must be >= 1");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("cf_continuity_bound: eps outside [0, 1]");
  return eps * std::log2(static_cast<double>(d)) + (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
}

// ---------------------------------------------------------------------------
// Variational C_r

VariationalResult relative_entropy_of_coherence_variational(const DensityMatrix& rho,
                                                            const VariationalOptions& options) {
  const int d = rho.dim();
  std::vector<double> diag(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = std::max(rho(i, i).real(), 0.0);

  // Coordinates with a zero diagonal are a face of the simplex the optimum
  // sits on; they are pinned to zero.
  std::vector<int> active;
  for (int i = 0; i < d; ++i) {
    if (diag[static_cast<std::size_t>(i)] > 0.0) active.push_back(i);
  }
  std::vector<double> logs(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
  for (int i : active) logs[static_cast<std::size_t>(i)] = -std::log(static_cast<double>(active.size()));

  auto to_sigma = [&](const std::vector<double>& l) {
    std::vector<double> s(static_cast<std::size_t>(d), 0.0);
    for (int i : active) s[static_cast<std::size_t>(i)] = std::exp(l[static_cast<std::size_t>(i)]);
    return s;
  };
  auto objective = [&](const std::vector<double>& s) {
    return relative_entropy(rho, DensityMatrix::diagonal(s));
  };
  // df/ds_i = -rho_ii / (s_i ln 2); the Frank-Wolfe gap for this objective
  // is (max_i rho_ii / s_i - sum_i rho_ii) / ln 2.
  auto gap_of = [&](const std::vector<double>& s) {
    double best = 0.0;
    double mass = 0.0;
    for (int i : active) {
      best = std::max(best, diag[static_cast<std::size_t>(i)] / s[static_cast<std::size_t>(i)]);
      mass += diag[static_cast<std::size_t>(i)];
    }
    return std::max(0.0, (best - mass) / kLn2);
  };

  std::vector<double> s = to_sigma(logs);
  double f = objective(s);
  double gap = gap_of(s);
  int it = 0;
  for (; it < options.max_iterations && gap > options.gap_tolerance; ++it) {
    double eta = kLn2;
    bool improved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial = logs;
      double mx = -std::numeric_limits<double>::infinity();
      for (int i : active) {
        const auto k = static_cast<std::size_t>(i);
        trial[k] += eta * diag[k] / (s[k] * kLn2);
        mx = std::max(mx, trial[k]);
      }
      double z = 0.0;
      for (int i : active) z += std::exp(trial[static_cast<std::size_t>(i)] - mx);
      const double lz = mx + std::log(z);
      for (int i : active) trial[static_cast<std::size_t>(i)] -= lz;
      const auto st = to_sigma(trial);
      const double ft = objective(st);
      // Near the optimum the objective sits at rounding level; the gap, not
      // f, decides termination, so equal-within-rounding steps are taken.
      if (ft <= f + 1e-14 * (1.0 + std::abs(f))) {
        logs = std::move(trial);
        s = st;
        f = ft;
        improved = true;
        break;
      }
      eta *= 0.5;
    }
    gap = gap_of(s);
    if (!improved) break;
  }
  if (gap > options.gap_tolerance && gap > 1e-9) {
    throw ConvergenceError("relative_entropy_of_coherence_variational: duality gap " +
                               std::to_string(gap) + " after " + std::to_string(it) + " iterations",
                           f);
  }
  return {f, s, it, gap};
}

// ---------------------------------------------------------------------------
// Convex roof

ConvexRoofResult coherence_of_formation(const DensityMatrix& rho, const RoofOptions& options) {
  const int d = rho.dim();
  const Spectrum spec = block_spectrum(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = spec.values.size() - 1; k >= 0; --k) {
    if (spec.values(k) > kWeightFloor) support.push_back(k);
  }
  const int r = static_cast<int>(support.size());
  Matrix at(r, d);
  for (int k = 0; k < r; ++k) {
    const auto idx = support[static_cast<std::size_t>(k)];
    at.row(k) = std::sqrt(spec.values(idx)) * spec.vectors.col(idx).transpose();
  }
  const int m = std::max(options.max_ensemble > 0 ? options.max_ensemble : d * d, r);
  const int restarts = std::max(options.restarts, 1);
  const RoofObjective obj(at);

  struct Candidate {
    double value;
    Ensemble ensemble;
  };
  std::vector<Candidate> candidates;
  std::vector<double> restart_values;
  for (int k = 0; k < restarts; ++k) {
    Matrix u0;
    if (k == 0) {
      u0 = Matrix::Zero(m, r);
      u0.topRows(r) = Matrix::Identity(r, r);
    } else {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(k)));
      u0 = haar_isometry(m, r, rng);
    }
    const auto out = descend(obj, std::move(u0), options.max_iterations);
    Ensemble ens = ensemble_from(out.u * at);
    const double value = ens.average_coherence();
    restart_values.push_back(value);
    candidates.push_back({value, std::move(ens)});
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, c.value);
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (c.value <= best + 1e-12 && (chosen == nullptr || c.ensemble.size() < chosen->ensemble.size())) {
      chosen = &c;
    }
  }
  std::vector<double> sorted = restart_values;
  std::sort(sorted.begin(), sorted.end());
  const bool converged = sorted.size() >= 2 && sorted[1] - sorted[0] <= 1e-6;
  return {chosen->value, chosen->ensemble, restarts, converged, std::move(restart_values), options.seed};
}

// ---------------------------------------------------------------------------

RateBounds conversion_rate_bounds(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const RoofOptions& options) {
  const double cr_sigma = relative_entropy_of_coherence(sigma);
  if (cr_sigma <= 1e-9) {
    throw UndefinedRate("conversion_rate_bounds: target state is incoherent");
  }
  const double cr_rho = relative_entropy_of_coherence(rho);
  const double cf_rho = coherence_of_formation(rho, options).value;
  const double cf_sigma = coherence_of_formation(sigma, options).value;
  return {cr_rho / cf_sigma, std::min(cr_rho / cr_sigma, cf_rho / cf_sigma)};
}

}  // namespace cohkit
