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

// Coherence quantifiers.
//
//   entropy of coherence     C(psi)  = H(|psi_i|^2)
//   relative entropy of coh. C_r(rho) = S(Delta(rho)) - S(rho)
//                                     = min over diagonal sigma of S(rho||sigma)
//   coherence of formation   C_f(rho) = min over ensembles of sum p_i C(psi_i)
//
// C_r is the distillable coherence and C_f the coherence cost. C_f has no
// closed form beyond qubits; coherence_of_formation() returns an optimizer
// upper bound and says so in its result type.

#ifndef COHKIT_MEASURES_HPP_
#define COHKIT_MEASURES_HPP_

#include <cstdint>
#include <vector>

#include "cohkit/qstate.hpp"

namespace cohkit {

/// Convex decomposition {(p_i, psi_i)} of a density matrix.
class Ensemble {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-10; members share a
  /// dimension.
  Ensemble(std::vector<double> weights, std::vector<PureState> members);

  std::size_t size() const noexcept { return weights_.size(); }
  int dim() const noexcept { return members_.front().dim(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<PureState>& members() const noexcept { return members_; }
  /// sum p_i |psi_i><psi_i|
  DensityMatrix state() const;
  /// sum p_i C(psi_i)
  double average_coherence() const;

 private:
  std::vector<double> weights_;
  std::vector<PureState> members_;
};

struct ConvexRoofResult {
  double value = 0.0;  // upper bound on C_f(rho)
  Ensemble ensemble;
  int restarts = 0;
  bool converged = false;
  std::vector<double> restart_values;  // per restart, in restart order
  std::uint64_t seed = 0;
};

struct RoofOptions {
  int restarts = 32;
  int max_ensemble = 0;  // 0: d^2
  std::uint64_t seed = 0;
  int max_iterations = 4000;
};

struct VariationalResult {
  double value = 0.0;
  std::vector<double> minimizer;  // diagonal of the optimal sigma
  int iterations = 0;
  double gap = 0.0;  // Frank-Wolfe duality gap at termination (bits)
};

struct VariationalOptions {
  int max_iterations = 20000;
  double gap_tolerance = 1e-10;
};

struct RateBounds {
  double lower = 0.0;
  double upper = 0.0;
};

double entropy_of_coherence(const PureState& psi);

double relative_entropy_of_coherence(const DensityMatrix& rho);
/// Block version: S(Delta_P(rho)) - S(rho) for the decohering map of `partition`.
double relative_entropy_of_coherence(const DensityMatrix& rho, const BasisPartition& partition);

/// Minimizes S(rho || diag(s)) over the probability simplex by exponentiated
/// gradient with backtracking, evaluating the objective through the generic
/// relative_entropy(). Throws ConvergenceError (carrying the best value) if
/// the duality gap is still above tolerance after max_iterations.
VariationalResult relative_entropy_of_coherence_variational(const DensityMatrix& rho,
                                                            const VariationalOptions& options = {});

/// Upper bound on C_f by random-restart Riemannian descent over ensembles
/// psi~_i = sum_k U_ik sqrt(lambda_k) e_k, U an m x r isometry on the
/// spectral square root (every m-member ensemble of rho arises this way).
/// Restart 0 starts from the block-wise spectral ensemble; restart k > 0
/// from a Haar isometry seeded by derive_seed(seed, k).
ConvexRoofResult coherence_of_formation(const DensityMatrix& rho, const RoofOptions& options = {});

/// Closed form for d = 2: h((1 + sqrt(1 - 4|rho_01|^2)) / 2).
double qubit_coherence_of_formation(const DensityMatrix& rho);

/// eps log2 d + 2 h(eps / 2), valid for ||rho - sigma||_1 <= eps.
double cr_continuity_bound(int d, double eps);
/// eps log2 d + (1 + eps) h(eps / (1 + eps)), valid for Bures distance <= eps.
double cf_continuity_bound(int d, double eps);

/// Bounds on the asymptotic rate rho -> sigma:
/// C_r(rho)/C_f(sigma) <= R <= min{C_r(rho)/C_r(sigma), C_f(rho)/C_f(sigma)}.
/// Throws UndefinedRate when sigma is incoherent (C_r(sigma) <= 1e-9).
RateBounds conversion_rate_bounds(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const RoofOptions& options = {});

}  // namespace cohkit

#endif  // COHKIT_MEASURES_HPP_
