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

#include "cohkit/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cohkit/asymptotic.hpp"
#include "cohkit/incoherent.hpp"
#include "cohkit/measures.hpp"
#include "cohkit/random.hpp"
#include "cohkit/reversibility.hpp"

namespace cohkit {
namespace {

class Suite {
 public:
  Suite(std::uint64_t seed, const SelftestHooks& hooks) : seed_(seed), h_(hooks) {}

  SelftestReport run() {
    qstate_checks();
    measure_checks();
    incoherent_checks();
    asymptotic_checks();
    reversibility_checks();
    return {seed_, std::move(checks_)};
  }

 private:
  // Runs `body` for `samples` instances; body returns the error of one
  // instance, which must not exceed `limit`.
  template <typename F>
  void check(const char* module, const char* name, int samples, double limit, F body) {
    const std::uint64_t s = derive_seed(seed_, checks_.size());
    Rng rng(s);
    SelftestCheck c{module, name, true, s, samples, 0.0, ""};
    try {
      for (int k = 0; k < samples; ++k) {
        const double err = body(rng, k);
        if (!(err <= limit)) {
          c.passed = false;
          if (c.detail.empty()) c.detail = "instance " + std::to_string(k);
        }
        if (std::isnan(err) || err > c.worst) c.worst = err;
      }
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    checks_.push_back(std::move(c));
  }

  void qstate_checks() {
    check("qstate", "entropy-additivity", 10, 1e-8, [&](Rng& rng, int) {
      const auto a = random_density_matrix(2 + static_cast<int>(rng.uniform_int(3)), rng);
      const auto b = random_density_matrix(2 + static_cast<int>(rng.uniform_int(3)), rng);
      return std::abs(h_.von_neumann_entropy(tensor(a, b)) - h_.von_neumann_entropy(a) -
                      h_.von_neumann_entropy(b));
    });
    check("qstate", "pinching-identity", 10, 1e-8, [&](Rng& rng, int) {
      const auto r = random_density_matrix(2 + static_cast<int>(rng.uniform_int(4)), rng);
      return std::abs(relative_entropy(r, dephase(r)) -
                      (h_.von_neumann_entropy(dephase(r)) - h_.von_neumann_entropy(r)));
    });
    check("qstate", "fidelity-trace-distance", 10, 1e-9, [&](Rng& rng, int) {
      const int d = 2 + static_cast<int>(rng.uniform_int(3));
      const auto r = random_density_matrix(d, rng);
      const auto s = random_density_matrix(d, rng);
      const auto rep = distances(r, s);
      // 1 - F <= T <= sqrt(1 - F^2)
      return std::max({0.0, (1.0 - rep.fidelity) - rep.trace_distance,
                       rep.trace_distance - std::sqrt(std::max(0.0, 1.0 - rep.fidelity * rep.fidelity))});
    });
  }

  void measure_checks() {
    check("measures", "unit-coherence-phi2", 1, 1e-12, [&](Rng&, int) {
      return std::abs(h_.entropy_of_coherence(maximally_coherent(2)) - 1.0);
    });
    check("measures", "cr-maximally-coherent", 15, 1e-12, [&](Rng&, int k) {
      const int d = k + 2;
      return std::abs(h_.relative_entropy_of_coherence(DensityMatrix::from_pure(maximally_coherent(d))) -
                      std::log2(static_cast<double>(d)));
    });
    check("measures", "variational-vs-closed-form", 5, 1e-6, [&](Rng& rng, int) {
      const auto r = random_density_matrix(2 + static_cast<int>(rng.uniform_int(5)), rng);
      return std::abs(relative_entropy_of_coherence_variational(r).value - h_.relative_entropy_of_coherence(r));
    });
    check("measures", "cf-qubit-closed-form", 3, 5e-3, [&](Rng& rng, int) {
      const auto r = random_density_matrix(2, rng);
      RoofOptions o;
      o.restarts = 8;
      o.seed = rng.next();
      return std::abs(coherence_of_formation(r, o).value - qubit_coherence_of_formation(r));
    });
    check("measures", "cf-above-cr", 3, 1e-6, [&](Rng& rng, int) {
      const auto r = random_density_matrix(3, rng);
      RoofOptions o;
      o.restarts = 4;
      o.seed = rng.next();
      return h_.relative_entropy_of_coherence(r) - coherence_of_formation(r, o).value;
    });
    check("measures", "cr-strong-monotonicity", 5, 1e-8, [&](Rng& rng, int) {
      const int d = 2 + static_cast<int>(rng.uniform_int(3));
      const auto r = random_density_matrix(d, rng);
      const auto ch = random_incoherent_channel(d, rng);
      double avg = 0.0;
      for (const auto& o : apply_selective(ch, r)) avg += o.probability * h_.relative_entropy_of_coherence(o.state);
      return avg - h_.relative_entropy_of_coherence(r);
    });
  }

  void incoherent_checks() {
    check("incoherent", "synthesis", 10, 1e-9, [&](Rng& rng, int) {
      const int d = 2 + static_cast<int>(rng.uniform_int(5));
      const auto [src, tgt] = random_majorizing_pair(d, rng);
      const auto res = synthesize_pure_transformation(src, tgt);
      double err = res.channel.completeness_error();
      if (classify_channel(res.channel) != ChannelClass::strictly_incoherent) err = 1.0;
      const auto target = DensityMatrix::from_pure(tgt);
      for (const auto& o : apply_selective(res.channel, DensityMatrix::from_pure(src))) {
        err = std::max(err, 1.0 - fidelity(o.state, target));
      }
      return err;
    });
    check("incoherent", "rank-monotonicity", 50, 0.0, [&](Rng& rng, int k) {
      const int d = 2 + static_cast<int>(rng.uniform_int(4));
      Vector v = Vector::Zero(d);
      for (int i = 0; i < d; ++i) {
        if (i == 0 || rng.uniform() < 0.6) v(i) = rng.complex_normal();
      }
      const auto psi = PureState::normalized(v);
      const auto ch = k % 2 ? random_strictly_incoherent_channel(d, rng) : random_incoherent_channel(d, rng);
      const int before = rank_of_diagonal(psi);
      double worst = 0.0;
      for (const auto& o : apply_selective(ch, DensityMatrix::from_pure(psi))) {
        int after = 0;
        for (int i = 0; i < o.state.dim(); ++i) after += o.state(i, i).real() > tol::kKrausZero;
        worst = std::max(worst, static_cast<double>(after - before));
      }
      return worst;
    });
  }

  void asymptotic_checks() {
    check("asymptotic", "concentration-rate", 1, 0.0, [&](Rng& rng, int) {
      Vector v(2);
      v << std::sqrt(0.9), std::sqrt(0.1);
      const std::int64_t n = 2000;
      const int trials = 20;
      const auto t = simulate_concentration(PureState(v), n, trials, rng.next());
      const double slack = 2.0 * std::log2(n + 1.0) / n + 3.0 * t.rate_stddev / std::sqrt(double(trials));
      return std::max(0.0, std::abs(t.mean_rate - t.target_rate) - slack);
    });
    check("asymptotic", "dilution-maximally-coherent", 1, 1e-12, [&](Rng&, int) {
      const auto t = simulate_dilution(maximally_coherent(2), 500, 0.0);
      return std::max(std::abs(t.fidelity[0] - 1.0), std::abs(t.rates[0] - 1.0));
    });
    check("asymptotic", "converse-overlap", 1, 1e-12, [&](Rng&, int) {
      // Uniform superposition on 2^10 of 2^12 indices: squared overlap 1/4
      // with the 12-qubit maximally coherent state, fidelity 1/2.
      Vector limited = Vector::Zero(4096);
      limited.head(1024).setConstant(1.0 / 32.0);
      const double overlap = std::abs(maximally_coherent(4096).amplitudes().dot(limited));
      return std::abs(overlap - converse_fidelity_bound(10, 1.0, 1.2));
    });
  }

  void reversibility_checks() {
    check("reversibility", "block-states-reversible", 3, 5e-3, [&](Rng& rng, int) {
      const auto r = random_block_state(2 + static_cast<int>(rng.uniform_int(3)), rng);
      RoofOptions o;
      o.restarts = 4;
      o.seed = rng.next();
      const auto v = is_reversible(r, tol::kBlockThreshold, o);
      return v.reversible ? std::abs(v.gap_upper) : 1.0;
    });
    check("reversibility", "qubit-mixed-irreversible", 1, 0.0, [&](Rng&, int) {
      Matrix m(2, 2);
      m << 0.5, 0.3, 0.3, 0.5;
      const auto v = is_reversible(DensityMatrix(m));
      return (!v.reversible && v.gap_upper > 0.01) ? 0.0 : 1.0;
    });
    check("reversibility", "no-bound-coherence", 20, 0.0, [&](Rng& rng, int k) {
      const int d = 2 + static_cast<int>(rng.uniform_int(5));
      const auto r = k % 4 == 0 ? DensityMatrix::diagonal(random_probability(d, rng)) : random_density_matrix(d, rng);
      return bound_coherence_check(r) ? 0.0 : 1.0;
    });
  }

  std::uint64_t seed_;
  const SelftestHooks& h_;
  std::vector<SelftestCheck> checks_;
};

}  // namespace

SelftestHooks SelftestHooks::library() {
  SelftestHooks h;
  h.von_neumann_entropy = [](const DensityMatrix& r) { return cohkit::von_neumann_entropy(r); };
  h.relative_entropy_of_coherence = [](const DensityMatrix& r) { return cohkit::relative_entropy_of_coherence(r); };
  h.entropy_of_coherence = [](const PureState& p) { return cohkit::entropy_of_coherence(p); };
  return h;
}

bool SelftestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SelftestReport run_selftest(std::uint64_t seed, const SelftestHooks& hooks) { return Suite(seed, hooks).run(); }

std::string format_selftest(const SelftestReport& report) {
  std::ostringstream out;
  int failed = 0;
  for (const auto& c : report.checks) {
    char worst[32];
    std::snprintf(worst, sizeof worst, "%.6e", c.worst);
    out << (c.passed ? "PASS " : "FAIL ") << c.module << '/' << c.name << " seed=" << c.seed
        << " samples=" << c.samples << " worst=" << worst;
    if (!c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
    failed += !c.passed;
  }
  out << (failed ? "FAILED " : "OK ") << report.checks.size() - failed << '/' << report.checks.size()
      << " checks passed, master seed " << report.seed << '\n';
  return out.str();
}

}  // namespace cohkit
