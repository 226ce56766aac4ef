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

// Seedable random source and random-instance generators.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard distributions are not, so every variate below is
// derived from raw engine words here; a (seed, call sequence) pair gives the
// same numbers on every platform.

#ifndef COHKIT_RANDOM_HPP_
#define COHKIT_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cohkit/qstate.hpp"

namespace cohkit {

class IncoherentChannel;

/// splitmix64 finalizer applied to (master, index); used to give every
/// restart or trial its own independent stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal (Box-Muller).
  double normal();
  Complex complex_normal();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  /// Exact Binomial(n, p) by inversion ordered outward from the mode.
  std::int64_t binomial(std::int64_t n, double p);
  /// Counts drawn from Multinomial(n, probabilities).
  std::vector<std::int64_t> multinomial(std::int64_t n, const std::vector<double>& probabilities);
  template <typename It>
  void shuffle(It first, It last) {
    for (auto n = last - first; n > 1; --n) {
      auto k = static_cast<decltype(n)>(uniform_int(static_cast<std::uint64_t>(n)));
      std::iter_swap(first + (n - 1), first + k);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-random pure state.
PureState random_pure_state(int dim, Rng& rng);
/// G G^dagger / tr with G a dim x rank complex Ginibre matrix; rank <= 0
/// means full rank.
DensityMatrix random_density_matrix(int dim, Rng& rng, int rank = 0);
/// Haar-random unitary (QR of Ginibre with phase fix).
Matrix random_unitary(int dim, Rng& rng);
/// Flat Dirichlet sample.
std::vector<double> random_probability(int dim, Rng& rng);
std::vector<int> random_permutation(int dim, Rng& rng);

/// Random strictly incoherent channel: K_l = sum_i c_l(i) |pi_l(i)><i| with
/// random permutations and sum_l |c_l(i)|^2 = 1. Some coefficients are
/// zeroed so outcome diagonal ranks can drop.
IncoherentChannel random_strictly_incoherent_channel(int dim, Rng& rng, int num_kraus = 3);
/// Random incoherent (generally not strictly incoherent) channel: a mixture
/// of a strictly incoherent part and a measure-and-prepare part
/// |r_l><w_l| with {w_l} a random orthonormal basis.
IncoherentChannel random_incoherent_channel(int dim, Rng& rng);

/// (source, target) with |target|^2 majorizing |source|^2: target
/// populations p are random (sometimes with zeros), source populations are
/// D p for a random mixture D of three permutations; phases are random.
std::pair<PureState, PureState> random_majorizing_pair(int dim, Rng& rng);

/// sum_j p_j |phi_j><phi_j| with phi_j on the blocks of a random partition of
/// {0, ..., dim-1}, every amplitude of phi_j on its block nonzero.
DensityMatrix random_block_state(int dim, Rng& rng);

}  // namespace cohkit

#endif  // COHKIT_RANDOM_HPP_
