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

#include "cohkit/reversibility.hpp"

#include <algorithm>
#include <cmath>

namespace cohkit {

BasisPartition BlockDecomposition::partition(int dim) const {
  std::vector<std::vector<int>> b;
  b.reserve(blocks.size());
  for (const auto& blk : blocks) b.push_back(blk.indices);
  return BasisPartition(dim, std::move(b));
}

BlockDecomposition detect_blocks(const DensityMatrix& rho, double threshold) {
  if (!(threshold >= 0.0)) throw DomainError("detect_blocks: threshold must be >= 0");
  const Matrix& m = rho.matrix();
  const BasisPartition part = connected_blocks(m, threshold);
  BlockDecomposition out;
  out.threshold = threshold;
  for (const auto& idx : part.blocks()) {
    const auto b = static_cast<Eigen::Index>(idx.size());
    Matrix sub(b, b);
    for (Eigen::Index r = 0; r < b; ++r) {
      for (Eigen::Index c = 0; c < b; ++c) {
        sub(r, c) = m(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      }
    }
    CoherenceBlock blk;
    blk.indices = idx;
    blk.weight = std::max(sub.trace().real(), 0.0);
    if (blk.weight > 0.0) blk.state = DensityMatrix(Matrix(sub / blk.weight));
    out.blocks.push_back(std::move(blk));
  }
  const int d = rho.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (part.block_of(i) != part.block_of(j)) {
        out.residual_offblock_mass = std::max(out.residual_offblock_mass, std::abs(m(i, j)));
      }
    }
  }
  return out;
}

ReversibilityVerdict is_reversible(const DensityMatrix& rho, double threshold, const RoofOptions& roof) {
  ReversibilityVerdict v;
  v.decomposition = detect_blocks(rho, threshold);
  bool pure_blocks = true;
  for (const auto& blk : v.decomposition.blocks) {
    double defect = 0.0;
    if (blk.state) {
      const RealVector ev = blk.state->eigenvalues();
      defect = std::max(0.0, 1.0 - ev.maxCoeff() / blk.state->matrix().trace().real());
    }
    v.block_purity_defects.push_back(defect);
    pure_blocks = pure_blocks && defect <= tol::kPurityDefect;
  }
  v.reversible = pure_blocks && v.decomposition.residual_offblock_mass <= tol::kOffBlockResidual;
  v.cr = relative_entropy_of_coherence(rho);
  const auto cf = coherence_of_formation(rho, roof);
  v.cf_upper = cf.value;
  v.cf_converged = cf.converged;
  v.gap_upper = v.cf_upper - v.cr;
  return v;
}

bool bound_coherence_check(const DensityMatrix& rho) {
  if (relative_entropy_of_coherence(rho) > tol::kBoundCoherence) return true;
  return rho.max_off_diagonal() <= tol::kBoundCoherence;
}

}  // namespace cohkit
