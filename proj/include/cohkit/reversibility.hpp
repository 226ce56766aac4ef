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

// Reversibility of mixed states.
//
// rho is reversible (distillable coherence equals coherence cost) iff
//   rho = sum_j p_j |phi_j><phi_j|,  phi_j supported on disjoint basis blocks.
// The blocks are the connected components of the graph with an edge i ~ i'
// whenever |rho_ii'| exceeds the threshold.

#ifndef COHKIT_REVERSIBILITY_HPP_
#define COHKIT_REVERSIBILITY_HPP_

#include <optional>
#include <vector>

#include "cohkit/measures.hpp"
#include "cohkit/qstate.hpp"

namespace cohkit {

namespace tol {
inline constexpr double kBlockThreshold = 1e-10;
inline constexpr double kPurityDefect = 1e-8;
inline constexpr double kOffBlockResidual = 1e-10;
inline constexpr double kBoundCoherence = 1e-9;
}  // namespace tol

struct CoherenceBlock {
  std::vector<int> indices;
  double weight = 0.0;                // tr P_j rho P_j
  std::optional<DensityMatrix> state;  // P_j rho P_j / weight, on the block; absent if weight is 0
};

struct BlockDecomposition {
  std::vector<CoherenceBlock> blocks;
  double residual_offblock_mass = 0.0;  // max |rho_ii'| over i, i' in different blocks
  double threshold = tol::kBlockThreshold;

  BasisPartition partition(int dim) const;
};

struct ReversibilityVerdict {
  bool reversible = false;
  BlockDecomposition decomposition;
  std::vector<double> block_purity_defects;  // 1 - lambda_max / trace per block
  double cr = 0.0;
  double cf_upper = 0.0;
  double gap_upper = 0.0;  // cf_upper - cr
  bool cf_converged = false;
};

BlockDecomposition detect_blocks(const DensityMatrix& rho, double threshold = tol::kBlockThreshold);

/// The boolean is decided by structure alone; the measures are reported as
/// corroboration.
ReversibilityVerdict is_reversible(const DensityMatrix& rho, double threshold = tol::kBlockThreshold,
                                   const RoofOptions& roof = {});

/// (C_r(rho) <= 1e-9) implies (max off-diagonal <= 1e-9).
bool bound_coherence_check(const DensityMatrix& rho);

}  // namespace cohkit

#endif  // COHKIT_REVERSIBILITY_HPP_
