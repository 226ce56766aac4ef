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

#include "cohkit/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "cohkit/random.hpp"

namespace cohkit {
namespace {

constexpr double kPruneMass = 1e-20;
constexpr double kTypicalSlack = 1e-12;

void require_copies(std::int64_t n) {
  if (n < 1) throw DomainError("number of copies must be >= 1, got " + std::to_string(n));
  if (n > kMaxCopies) throw BudgetExceeded("number of copies " + std::to_string(n) + " exceeds budget");
}

double log_binomial_pmf(std::int64_t r, std::int64_t k, double p) {
  double v = std::lgamma(static_cast<double>(r) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
             std::lgamma(static_cast<double>(r - k) + 1.0);
  if (k > 0) v += static_cast<double>(k) * std::log(p);
  if (r - k > 0) v += static_cast<double>(r - k) * std::log1p(-p);
  return v;
}

void finish_stats(ProtocolTrace& t) {
  t.trials = static_cast<int>(t.rates.size());
  const double sum = std::accumulate(t.rates.begin(), t.rates.end(), 0.0);
  t.mean_rate = t.rates.empty() ? 0.0 : sum / static_cast<double>(t.rates.size());
  double ss = 0.0;
  for (double r : t.rates) ss += (r - t.mean_rate) * (r - t.mean_rate);
  t.rate_stddev = t.rates.size() > 1 ? std::sqrt(ss / static_cast<double>(t.rates.size() - 1)) : 0.0;
}

// Letters of equal probability, pooled; zero-probability letters dropped.
struct LetterGroup {
  double q = 0.0;     // per-letter probability
  double log2q = 0.0;
  double mass = 0.0;  // q * multiplicity
};

std::vector<LetterGroup> pool_letters(std::span<const double> q) {
  std::vector<double> s;
  for (double v : q) {
    if (v > 0.0) s.push_back(v);
  }
  std::sort(s.begin(), s.end(), std::greater<>());
  std::vector<LetterGroup> groups;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < s.size() && std::abs(s[j] - s[i]) <= 1e-14) sum += s[j++];
    const double mean = sum / static_cast<double>(j - i);
    groups.push_back({mean, std::log2(mean), sum});
    i = j;
  }
  return groups;
}

class TypicalEnumerator {
 public:
  TypicalEnumerator(std::vector<LetterGroup> groups, std::int64_t n, double entropy, double delta,
                    std::int64_t budget)
      : g_(std::move(groups)), n_(n), h_(entropy), delta_(delta), budget_(budget) {}

  TypicalProbability run() {
    double total = 0.0;
    for (const auto& g : g_) total += g.mass;
    visit(0, n_, total, 1.0, 0.0);
    return {std::clamp(prob_, 0.0, 1.0), std::max(pruned_, 0.0), nodes_};
  }

 private:
  bool typical(double log2p) const {
    return std::abs(-log2p / static_cast<double>(n_) - h_) <= delta_ + kTypicalSlack;
  }

  void visit(std::size_t level, std::int64_t left, double rest_mass, double mass, double log2p) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("typical_set_probability: more than " + std::to_string(budget_) + " nodes");
    }
    const auto& g = g_[level];
    if (level + 1 == g_.size()) {
      if (typical(log2p + static_cast<double>(left) * g.log2q)) prob_ += mass;
      return;
    }
    const double p = std::clamp(g.mass / rest_mass, 0.0, 1.0);
    const double next_rest = rest_mass - g.mass;
    if (p >= 1.0) {
      visit(level + 1, 0, next_rest, mass, log2p + static_cast<double>(left) * g.log2q);
      return;
    }
    // Binomial pmfs are unimodal, so each direction from the mode stops at
    // the first child below the cutoff.
    double seen = 0.0;
    auto child = [&](std::int64_t k) {
      const double pmf = std::exp(log_binomial_pmf(left, k, p));
      if (mass * pmf < kPruneMass) return false;
      seen += pmf;
      visit(level + 1, left - k, next_rest, mass * pmf, log2p + static_cast<double>(k) * g.log2q);
      return true;
    };
    const auto mode = std::clamp(static_cast<std::int64_t>(std::floor((static_cast<double>(left) + 1.0) * p)),
                                 std::int64_t{0}, left);
    for (std::int64_t k = mode; k <= left && child(k); ++k) {
    }
    for (std::int64_t k = mode - 1; k >= 0 && child(k); --k) {
    }
    pruned_ += mass * std::max(0.0, 1.0 - seen);
  }

  std::vector<LetterGroup> g_;
  std::int64_t n_;
  double h_;
  double delta_;
  std::int64_t budget_;
  double prob_ = 0.0;
  double pruned_ = 0.0;
  std::int64_t nodes_ = 0;
};

// Smallest |-(1/N) log2 Q(x^N) - H(Q)| over sequences, or 0 if there are too
// many count vectors to scan.
double min_typical_deviation(std::span<const double> q, std::int64_t N) {
  const auto groups = pool_letters(q);
  const double h = shannon_entropy(q);
  double compositions = 1.0;
  for (std::size_t k = 1; k < groups.size(); ++k) {
    compositions *= static_cast<double>(N + static_cast<std::int64_t>(k)) / static_cast<double>(k);
  }
  if (compositions > 1e6) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> c(groups.size(), 0);
  auto rec = [&](auto&& self, std::size_t level, std::int64_t left, double log2p) -> void {
    if (level + 1 == groups.size()) {
      const double lp = log2p + static_cast<double>(left) * groups[level].log2q;
      best = std::min(best, std::abs(-lp / static_cast<double>(N) - h));
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      self(self, level + 1, left - k, log2p + static_cast<double>(k) * groups[level].log2q);
    }
  };
  rec(rec, 0, N, 0.0);
  return best;
}

// Largest-remainder rounding of n * p.
std::vector<std::int64_t> round_counts(const std::vector<double>& p, std::int64_t n) {
  std::vector<std::int64_t> c(p.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::int64_t used = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double x = p[j] * static_cast<double>(n);
    c[j] = static_cast<std::int64_t>(std::floor(x));
    used += c[j];
    rem.emplace_back(x - std::floor(x), j);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++c[rem[k % rem.size()].second];
  return c;
}

bool counts_typical(const std::vector<std::int64_t>& c, const std::vector<double>& p, std::int64_t n,
                    double delta) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (std::abs(static_cast<double>(c[j]) / static_cast<double>(n) - p[j]) > delta + kTypicalSlack) {
      return false;
    }
  }
  return true;
}

bool box_feasible(const std::vector<double>& p, std::int64_t n, double delta) {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  const double nd = static_cast<double>(n);
  for (double pj : p) {
    const auto a = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(nd * (pj - delta) - 1e-9)));
    const auto b = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor(nd * (pj + delta) + 1e-9)));
    if (a > b) return false;
    lo += a;
    hi += b;
  }
  return lo <= n && n <= hi;
}

}  // namespace

double log2_type_class_size(std::span<const std::int64_t> counts) {
  std::int64_t n = 0;
  double v = 0.0;
  for (auto c : counts) {
    if (c < 0) throw DomainError("log2_type_class_size: negative count");
    n += c;
    v -= std::lgamma(static_cast<double>(c) + 1.0);
  }
  v += std::lgamma(static_cast<double>(n) + 1.0);
  return std::max(v, 0.0) / std::numbers::ln2;
}

TypicalProbability typical_set_probability(std::span<const double> q, std::int64_t n, double delta,
                                           std::int64_t node_budget) {
  require_copies(n);
  if (!(delta >= 0.0)) throw DomainError("typical_set_probability: delta must be >= 0");
  auto groups = pool_letters(q);
  if (groups.empty()) throw DomainError("typical_set_probability: empty distribution");
  return TypicalEnumerator(std::move(groups), n, shannon_entropy(q), delta, node_budget).run();
}

ProtocolTrace simulate_concentration(const PureState& psi, std::int64_t n, int trials,
                                     std::uint64_t seed) {
  require_copies(n);
  if (trials < 1) throw DomainError("simulate_concentration: trials must be >= 1");
  const auto q = psi.populations();
  ProtocolTrace t;
  t.n = n;
  t.seed = seed;
  t.target_rate = shannon_entropy(q);
  for (int k = 0; k < trials; ++k) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
    Rng rng(s);
    TypeMeasurementOutcome o;
    o.type_counts = rng.multinomial(n, q);
    o.log_class_size = log2_type_class_size(o.type_counts);
    double log2p = o.log_class_size;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (o.type_counts[i] > 0) log2p += static_cast<double>(o.type_counts[i]) * std::log2(q[i]);
    }
    o.probability = std::clamp(std::exp2(log2p), 0.0, 1.0);
    o.achieved_rate = o.log_class_size / static_cast<double>(n);
    t.rates.push_back(o.achieved_rate);
    t.fidelity.push_back(1.0);
    t.trial_seeds.push_back(s);
    t.outcomes.push_back(std::move(o));
  }
  finish_stats(t);
  return t;
}

ProtocolTrace simulate_dilution(const PureState& psi, std::int64_t n, double delta, std::uint64_t seed,
                                std::int64_t node_budget) {
  const auto q = psi.populations();
  const auto tp = typical_set_probability(q, n, delta, node_budget);
  ProtocolTrace t;
  t.n = n;
  t.seed = seed;
  t.target_rate = shannon_entropy(q);
  t.rates = {t.target_rate + delta};
  t.fidelity = {std::sqrt(tp.probability)};
  t.trial_seeds = {seed};
  t.dilution = DilutionDetail{tp.probability, tp.pruned_mass, tp.nodes, delta};
  finish_stats(t);
  return t;
}

ProtocolTrace simulate_formation(const Ensemble& ensemble, std::int64_t n, const FormationOptions& options) {
  require_copies(n);
  if (options.trials < 1) throw DomainError("simulate_formation: trials must be >= 1");
  if (!(options.delta1 >= 0.0 && options.delta2 >= 0.0)) {
    throw DomainError("simulate_formation: deltas must be >= 0");
  }
  const std::size_t L = ensemble.size();
  const auto& p = ensemble.weights();
  std::vector<std::vector<double>> q(L);
  std::vector<double> coh(L);
  for (std::size_t j = 0; j < L; ++j) {
    q[j] = ensemble.members()[j].populations();
    coh[j] = shannon_entropy(q[j]);
  }

  double delta1 = options.delta1;
  const auto rounded = round_counts(p, n);
  if (!box_feasible(p, n, delta1)) {
    for (std::size_t j = 0; j < L; ++j) {
      delta1 = std::max(delta1, std::abs(static_cast<double>(rounded[j]) / static_cast<double>(n) - p[j]));
    }
  }

  // (member, block length) -> (delta2 used, Pr of its typical set)
  std::map<std::pair<std::size_t, std::int64_t>, std::pair<double, double>> member_cache;
  auto member = [&](std::size_t j, std::int64_t N) -> std::pair<double, double> {
    if (N == 0) return {options.delta2, 1.0};
    const auto key = std::make_pair(j, N);
    if (auto it = member_cache.find(key); it != member_cache.end()) return it->second;
    double d2 = options.delta2;
    double pr = typical_set_probability(q[j], N, d2, options.node_budget).probability;
    if (pr <= 0.0) {
      d2 = std::max(d2, min_typical_deviation(q[j], N));
      pr = typical_set_probability(q[j], N, d2, options.node_budget).probability;
    }
    return member_cache[key] = {d2, pr};
  };
  auto trial_rate = [&](const std::vector<std::int64_t>& c, double& d2_max) {
    double r = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      const double d2 = c[j] > 0 ? member(j, c[j]).first : options.delta2;
      d2_max = std::max(d2_max, d2);
      r += (static_cast<double>(c[j]) / static_cast<double>(n) + delta1) * (coh[j] + d2);
    }
    return r;
  };

  ProtocolTrace t;
  t.n = n;
  t.seed = options.seed;
  t.target_rate = ensemble.average_coherence();
  FormationDetail detail;
  detail.ensemble_size = L;
  detail.typical_label_mass = std::numeric_limits<double>::quiet_NaN();
  double d2_max = options.delta2;

  for (int k = 0; k < options.trials; ++k) {
    const auto s = derive_seed(options.seed, static_cast<std::uint64_t>(k));
    Rng rng(s);
    std::vector<std::int64_t> c;
    bool found = false;
    for (int attempt = 0; attempt < 100000 && !found; ++attempt) {
      c = rng.multinomial(n, p);
      found = counts_typical(c, p, n, delta1);
    }
    if (!found) c = rounded;
    t.rates.push_back(trial_rate(c, d2_max));
    if (options.member_fidelity) {
      double f = 1.0;
      for (std::size_t j = 0; j < L; ++j) f *= std::sqrt(member(j, c[j]).second);
      t.fidelity.push_back(f);
    } else {
      t.fidelity.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    t.trial_seeds.push_back(s);
  }

  // Small-n reconstruction of rho^(n) from the label-typical mixture.
  const int d = ensemble.dim();
  const int cap = std::min(options.reconstruct_dim_cap, 4096);
  const double full_dim = std::pow(static_cast<double>(d), static_cast<double>(n));
  const double sequences = std::pow(static_cast<double>(L), static_cast<double>(n));
  if (full_dim <= cap && sequences <= 1e5) {
    const auto D = static_cast<Eigen::Index>(std::llround(full_dim));
    const auto nn = static_cast<std::size_t>(n);
    Matrix out = Matrix::Zero(D, D);
    double mass_t = 0.0;
    double bound = 0.0;
    std::vector<std::size_t> label(nn, 0);
    std::vector<int> digits(nn, 0);
    const auto seq_count = static_cast<std::int64_t>(std::llround(sequences));
    for (std::int64_t code = 0; code < seq_count; ++code) {
      std::int64_t rem = code;
      std::vector<std::int64_t> c(L, 0);
      double w = 1.0;
      for (std::size_t pos = 0; pos < nn; ++pos) {
        label[pos] = static_cast<std::size_t>(rem % static_cast<std::int64_t>(L));
        rem /= static_cast<std::int64_t>(L);
        ++c[label[pos]];
        w *= p[label[pos]];
      }
      if (!counts_typical(c, p, n, delta1) || w <= 0.0) continue;
      std::vector<double> d2(L), target(L);
      double amp_bound = 1.0;
      for (std::size_t j = 0; j < L; ++j) {
        const auto [dj, pr] = member(j, c[j]);
        d2[j] = dj;
        amp_bound *= std::sqrt(pr);
      }
      Vector psi = Vector::Zero(D);
      for (Eigen::Index x = 0; x < D; ++x) {
        Eigen::Index r = x;
        for (std::size_t pos = nn; pos-- > 0;) {
          digits[pos] = static_cast<int>(r % d);
          r /= d;
        }
        Complex a(1.0);
        std::vector<double> lp(L, 0.0);
        for (std::size_t pos = 0; pos < nn && a != Complex(0.0); ++pos) {
          const auto j = label[pos];
          a *= ensemble.members()[j].amplitudes()(digits[pos]);
          const double qj = q[j][static_cast<std::size_t>(digits[pos])];
          lp[j] += qj > 0.0 ? std::log2(qj) : 0.0;
        }
        if (a == Complex(0.0)) continue;
        bool ok = true;
        for (std::size_t j = 0; j < L && ok; ++j) {
          if (c[j] == 0) continue;
          ok = std::abs(-lp[j] / static_cast<double>(c[j]) - coh[j]) <= d2[j] + kTypicalSlack;
        }
        if (ok) psi(x) = a;
      }
      const double norm = psi.norm();
      if (norm <= 0.0) continue;
      psi /= norm;
      out += w * psi * psi.adjoint();
      mass_t += w;
      bound += w * amp_bound;
    }
    if (mass_t > 0.0) {
      out /= mass_t;
      DensityMatrix power = ensemble.state();
      const DensityMatrix single = power;
      for (std::int64_t k = 1; k < n; ++k) power = tensor(power, single);
      detail.reconstructed = true;
      detail.typical_label_mass = mass_t;
      detail.reconstruction_fidelity = fidelity(power, DensityMatrix(out));
      detail.fidelity_lower_bound = std::sqrt(mass_t) * bound / mass_t;
    }
  }
  detail.delta1 = delta1;
  detail.delta2 = d2_max;
  t.formation = detail;
  finish_stats(t);
  return t;
}

ProtocolTrace simulate_formation(const DensityMatrix& rho, std::int64_t n, const FormationOptions& options,
                                 const RoofOptions& roof) {
  return simulate_formation(coherence_of_formation(rho, roof).ensemble, n, options);
}

double distillable_rate(const DensityMatrix& rho) { return relative_entropy_of_coherence(rho); }

// ---------------------------------------------------------------------------
// Covering

namespace {

template <typename Scalar>
std::vector<double> covering_deviations(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                                        int S, int trials, std::uint64_t seed, int per_trial) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto T = gram.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  // Eigenvalues at rounding level are zeroed; their square roots would
  // otherwise add ~1e-8 of noise to every deviation.
  const double floor = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
  const auto vals = es.eigenvalues().unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  const Mat root = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  const Mat mean = root * root.adjoint() / static_cast<double>(T);
  const auto M = T / S;
  const auto take = per_trial > 0 ? std::min<Eigen::Index>(per_trial, M) : M;
  std::vector<double> out;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(T));
  for (int k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(order.begin(), order.end());
    for (Eigen::Index b = 0; b < take; ++b) {
      Mat cols(T, S);
      for (int s = 0; s < S; ++s) cols.col(s) = root.col(order[static_cast<std::size_t>(b * S + s)]);
      const Mat h = cols * cols.adjoint() / static_cast<double>(S) - mean;
      Eigen::SelfAdjointEigenSolver<Mat> eh(h, Eigen::EigenvaluesOnly);
      out.push_back(eh.eigenvalues().cwiseAbs().sum());
    }
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

CoveringCheckReport covering_check(const Ensemble& ensemble, int n, int S, int trials, std::uint64_t seed,
                                   int subsets_per_trial) {
  if (n < 1 || trials < 1) throw DomainError("covering_check: n and trials must be >= 1");
  const auto X = ensemble.size();
  if (std::pow(static_cast<double>(X), n) > 1e5) {
    throw BudgetExceeded("covering_check: alphabet^n exceeds 1e5 sequences");
  }
  const auto counts = round_counts(ensemble.weights(), n);
  const double log2size = log2_type_class_size(counts);
  const auto class_size = static_cast<std::int64_t>(std::llround(std::exp2(log2size)));
  if (class_size > 4000) throw BudgetExceeded("covering_check: type class larger than 4000 sequences");
  if (S < 1 || S > class_size) {
    throw DomainError("covering_check: S must lie in [1, |T(P)|] = [1, " + std::to_string(class_size) + "]");
  }

  std::vector<int> seq;
  for (std::size_t x = 0; x < X; ++x) seq.insert(seq.end(), static_cast<std::size_t>(counts[x]), static_cast<int>(x));
  std::vector<std::vector<int>> cls;
  do {
    cls.push_back(seq);
  } while (std::next_permutation(seq.begin(), seq.end()));

  Matrix overlap(static_cast<Eigen::Index>(X), static_cast<Eigen::Index>(X));
  for (std::size_t a = 0; a < X; ++a) {
    for (std::size_t b = 0; b < X; ++b) {
      overlap(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          ensemble.members()[a].amplitudes().dot(ensemble.members()[b].amplitudes());
    }
  }
  const auto T = static_cast<Eigen::Index>(cls.size());
  Matrix gram(T, T);
  for (Eigen::Index s = 0; s < T; ++s) {
    for (Eigen::Index t = s; t < T; ++t) {
      Complex g(1.0);
      for (int k = 0; k < n; ++k) {
        g *= overlap(cls[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)],
                     cls[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]);
      }
      gram(s, t) = g;
      gram(t, s) = std::conj(g);
    }
  }

  CoveringCheckReport rep;
  rep.S = S;
  rep.M = class_size / S;
  rep.class_size = class_size;
  rep.type_counts = counts;
  rep.seed = seed;
  if (gram.imag().cwiseAbs().maxCoeff() <= 1e-14) {
    rep.deviations = covering_deviations<double>(gram.real(), S, trials, seed, subsets_per_trial);
  } else {
    rep.deviations = covering_deviations<Complex>(gram, S, trials, seed, subsets_per_trial);
  }
  for (double eps : kCoveringEpsilons) {
    rep.epsilons.push_back(eps);
    const auto good = std::count_if(rep.deviations.begin(), rep.deviations.end(),
                                    [eps](double v) { return v <= eps; });
    rep.fraction_good.push_back(static_cast<double>(good) / static_cast<double>(rep.deviations.size()));
  }
  rep.median = median_of(rep.deviations);
  return rep;
}

double mann_whitney_greater(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw DomainError("mann_whitney_greater: empty sample");
  std::vector<std::pair<double, int>> all;
  for (double v : x) all.emplace_back(v, 0);
  for (double v : y) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end());
  const double N = static_cast<double>(all.size());
  double rank_x = 0.0;
  double ties = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) rank_x += avg;
    }
    i = j;
  }
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double u = rank_x - nx * (nx + 1.0) / 2.0;
  const double mean = nx * ny / 2.0;
  const double var = nx * ny / 12.0 * ((N + 1.0) - ties / (N * (N - 1.0)));
  if (var <= 0.0) return u > mean ? 0.0 : 1.0;
  const double z = (u - mean - 0.5) / std::sqrt(var);
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

CoveringTrend covering_trend(const Ensemble& ensemble, int n, const std::vector<int>& sizes, int trials,
                             std::uint64_t seed, int subsets_per_trial, double alpha) {
  CoveringTrend out;
  for (int S : sizes) {
    out.reports.push_back(
        covering_check(ensemble, n, S, trials, derive_seed(seed, static_cast<std::uint64_t>(S)), subsets_per_trial));
    out.medians.push_back(out.reports.back().median);
  }
  out.decreasing = !sizes.empty();
  for (std::size_t k = 0; k + 1 < out.reports.size(); ++k) {
    out.p_values.push_back(mann_whitney_greater(out.reports[k].deviations, out.reports[k + 1].deviations));
    out.decreasing = out.decreasing && out.medians[k + 1] < out.medians[k] && out.p_values.back() < alpha;
  }
  return out;
}

double converse_fidelity_bound(std::int64_t n, double R, double Rtilde) {
  if (!(Rtilde > R)) throw DomainError("converse_fidelity_bound: requires Rtilde > R");
  if (n < 0) throw DomainError("converse_fidelity_bound: n must be >= 0");
  return std::exp2(-static_cast<double>(n) * (Rtilde - R) / 2.0);
}

}  // namespace cohkit
