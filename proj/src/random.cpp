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

#include "cohkit/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cohkit/incoherent.hpp"

namespace cohkit {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double q = 1.0 - p;
  const auto mode = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor((n + 1) * p)));
  const double nd = static_cast<double>(n);
  auto log_pmf = [&](std::int64_t k) {
    const double kd = static_cast<double>(k);
    return std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) +
           kd * std::log(p) + (nd - kd) * std::log(q);
  };
  // Inversion over outcomes enumerated outward from the mode, always taking
  // the more probable side next; any fixed enumeration order is exact.
  const double u = uniform();
  const double pm = std::exp(log_pmf(mode));
  double acc = pm;
  if (u < acc) return mode;
  std::int64_t lo = mode - 1;
  std::int64_t hi = mode + 1;
  double p_lo = lo >= 0 ? pm * static_cast<double>(mode) / static_cast<double>(n - mode + 1) * q / p : 0.0;
  double p_hi = hi <= n ? pm * static_cast<double>(n - mode) / static_cast<double>(mode + 1) * p / q : 0.0;
  std::int64_t last = mode;
  while (lo >= 0 || hi <= n) {
    const bool take_lo = hi > n || (lo >= 0 && p_lo >= p_hi);
    if (take_lo) {
      acc += p_lo;
      last = lo;
      if (u < acc) return lo;
      p_lo = lo > 0 ? p_lo * static_cast<double>(lo) / static_cast<double>(n - lo + 1) * q / p : 0.0;
      --lo;
    } else {
      acc += p_hi;
      last = hi;
      if (u < acc) return hi;
      p_hi = hi < n ? p_hi * static_cast<double>(n - hi) / static_cast<double>(hi + 1) * p / q : 0.0;
      ++hi;
    }
    if (p_lo == 0.0 && p_hi == 0.0 && acc > 1.0 - 1e-15) break;
  }
  return last;  // u landed in the rounding gap above the accumulated mass
}

std::vector<std::int64_t> Rng::multinomial(std::int64_t n, const std::vector<double>& probabilities) {
  std::vector<std::int64_t> counts(probabilities.size(), 0);
  double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  std::int64_t left = n;
  for (std::size_t k = 0; k + 1 < probabilities.size() && left > 0; ++k) {
    const double pk = mass > 0.0 ? std::clamp(probabilities[k] / mass, 0.0, 1.0) : 0.0;
    counts[k] = binomial(left, pk);
    left -= counts[k];
    mass -= probabilities[k];
  }
  if (!counts.empty()) counts.back() += left;
  return counts;
}

// ---------------------------------------------------------------------------

PureState random_pure_state(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return PureState::normalized(v);
}

DensityMatrix random_density_matrix(int dim, Rng& rng, int rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  Matrix g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
  }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(m);
}

Matrix random_unitary(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

std::vector<double> random_probability(int dim, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(rng.uniform_open());
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

std::vector<int> random_permutation(int dim, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm.begin(), perm.end());
  return perm;
}

IncoherentChannel random_strictly_incoherent_channel(int dim, Rng& rng, int num_kraus) {
  num_kraus = std::max(num_kraus, 1);
  std::vector<std::vector<int>> perms;
  for (int l = 0; l < num_kraus; ++l) perms.push_back(random_permutation(dim, rng));
  std::vector<Matrix> ks(static_cast<std::size_t>(num_kraus), Matrix::Zero(dim, dim));
  for (int i = 0; i < dim; ++i) {
    Vector c(num_kraus);
    for (int l = 0; l < num_kraus; ++l) {
      c(l) = rng.uniform() < 0.3 ? Complex(0.0) : rng.complex_normal();
    }
    if (c.norm() == 0.0) c(static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(num_kraus)))) = 1.0;
    c /= c.norm();
    for (int l = 0; l < num_kraus; ++l) {
      ks[static_cast<std::size_t>(l)](perms[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)], i) = c(l);
    }
  }
  std::vector<KrausOperator> kraus;
  for (auto& k : ks) {
    if (k.cwiseAbs().maxCoeff() > 0.0) kraus.emplace_back(std::move(k));
  }
  return IncoherentChannel(std::move(kraus));
}

IncoherentChannel random_incoherent_channel(int dim, Rng& rng) {
  const double t = 0.2 + 0.6 * rng.uniform();
  const auto strict = random_strictly_incoherent_channel(dim, rng, 2);
  std::vector<KrausOperator> kraus;
  for (const auto& k : strict.kraus()) kraus.emplace_back(k.matrix() * std::sqrt(t));
  const Matrix w = random_unitary(dim, rng);
  for (int l = 0; l < dim; ++l) {
    Matrix k = Matrix::Zero(dim, dim);
    const int r = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dim)));
    k.row(r) = w.col(l).adjoint() * std::sqrt(1.0 - t);
    kraus.emplace_back(std::move(k));
  }
  return IncoherentChannel(std::move(kraus));
}

std::pair<PureState, PureState> random_majorizing_pair(int dim, Rng& rng) {
  std::vector<double> p = random_probability(dim, rng);
  if (dim > 1 && rng.uniform() < 0.3) {
    const auto keep = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dim - 1)));
    const auto perm = random_permutation(dim, rng);
    for (int k = keep; k < dim; ++k) p[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = 0.0;
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= sum;
  }
  const auto lambda = random_probability(3, rng);
  std::vector<double> q(static_cast<std::size_t>(dim), 0.0);
  for (double l : lambda) {
    const auto perm = random_permutation(dim, rng);
    for (int i = 0; i < dim; ++i) {
      q[static_cast<std::size_t>(i)] += l * p[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
  }
  auto with_phases = [&](const std::vector<double>& pops) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
      v(i) = std::polar(std::sqrt(pops[static_cast<std::size_t>(i)]), 2.0 * std::numbers::pi * rng.uniform());
    }
    return PureState::normalized(v);
  };
  PureState source = with_phases(q);
  PureState target = with_phases(p);
  return {std::move(source), std::move(target)};
}

DensityMatrix random_block_state(int dim, Rng& rng) {
  const auto perm = random_permutation(dim, rng);
  std::vector<std::vector<int>> blocks;
  for (int k = 0; k < dim; ++k) {
    if (blocks.empty() || rng.uniform() < 0.4) blocks.emplace_back();
    blocks.back().push_back(perm[static_cast<std::size_t>(k)]);
  }
  const auto weights = random_probability(static_cast<int>(blocks.size()), rng);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Vector v = Vector::Zero(dim);
    for (int i : blocks[b]) {
      // Bounded away from zero so the block graph is connected.
      v(i) = std::polar(0.3 + rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
    }
    v.normalize();
    m += weights[b] * v * v.adjoint();
  }
  return DensityMatrix(m);
}

}  // namespace cohkit
