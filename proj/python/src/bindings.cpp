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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cohkit/asymptotic.hpp"
#include "cohkit/incoherent.hpp"
#include "cohkit/measures.hpp"
#include "cohkit/qstate.hpp"
#include "cohkit/reversibility.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cohkit;

namespace {

DensityMatrix state(const Matrix& m) { return DensityMatrix(m); }
PureState pure(const Vector& v) { return PureState(v); }

py::dict ensemble_dict(const Ensemble& e) {
  py::list members;
  for (const auto& m : e.members()) members.append(m.amplitudes());
  return py::dict("weights"_a = e.weights(), "members"_a = members);
}

py::dict trace_dict(const ProtocolTrace& t) {
  py::dict d("n"_a = t.n, "trials"_a = t.trials, "rates"_a = t.rates, "mean_rate"_a = t.mean_rate,
             "rate_stddev"_a = t.rate_stddev, "fidelity"_a = t.fidelity, "target_rate"_a = t.target_rate,
             "seed"_a = t.seed);
  if (t.dilution) {
    d["typical_probability"] = t.dilution->typical_probability;
    d["pruned_mass"] = t.dilution->pruned_mass;
  }
  return d;
}

py::dict witness_dict(const MajorizationWitness& w) {
  py::list terms;
  for (const auto& t : w.birkhoff) terms.append(py::make_tuple(t.weight, t.perm));
  py::dict d("holds"_a = w.holds, "source_spectrum"_a = w.source_spectrum,
             "target_spectrum"_a = w.target_spectrum, "birkhoff"_a = terms,
             "first_violation"_a = w.first_violation, "violation"_a = w.violation);
  if (w.bistochastic) d["bistochastic"] = *w.bistochastic;
  return d;
}

py::dict channel_dict(const IncoherentChannel& ch) {
  py::list kraus;
  for (const auto& k : ch.kraus()) kraus.append(k.matrix());
  return py::dict("kraus"_a = kraus, "class"_a = std::string(to_string(classify_channel(ch))),
                  "completeness_error"_a = ch.completeness_error());
}

IncoherentChannel channel(const std::vector<Matrix>& kraus) {
  std::vector<KrausOperator> ops;
  for (const auto& k : kraus) ops.emplace_back(k);
  return IncoherentChannel(std::move(ops));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Resource theory of coherence: measures, incoherent synthesis, protocols, reversibility.";

  auto base = py::register_exception<Error>(m, "CohkitError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<TransformationImpossible>(m, "TransformationImpossible", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UndefinedRate>(m, "UndefinedRate", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  m.def("von_neumann_entropy", [](const Matrix& rho) { return von_neumann_entropy(state(rho)); }, "rho"_a);
  m.def("entropy_of_coherence", [](const Vector& psi) { return entropy_of_coherence(pure(psi)); }, "psi"_a);
  m.def("relative_entropy_of_coherence", [](const Matrix& rho) { return relative_entropy_of_coherence(state(rho)); },
        "rho"_a);
  m.def(
      "relative_entropy_of_coherence_variational",
      [](const Matrix& rho) {
        const auto r = relative_entropy_of_coherence_variational(state(rho));
        return py::dict("value"_a = r.value, "minimizer"_a = r.minimizer, "gap"_a = r.gap,
                        "iterations"_a = r.iterations);
      },
      "rho"_a);
  m.def(
      "coherence_of_formation",
      [](const Matrix& rho, int restarts, std::uint64_t seed) {
        RoofOptions o;
        o.restarts = restarts;
        o.seed = seed;
        const auto r = coherence_of_formation(state(rho), o);
        return py::dict("value"_a = r.value, "converged"_a = r.converged, "restarts"_a = r.restarts,
                        "restart_values"_a = r.restart_values, "seed"_a = r.seed,
                        "ensemble"_a = ensemble_dict(r.ensemble));
      },
      "rho"_a, "restarts"_a = 32, "seed"_a = 0, "Upper bound on the coherence of formation.");
  m.def("qubit_coherence_of_formation", [](const Matrix& rho) { return qubit_coherence_of_formation(state(rho)); },
        "rho"_a);
  m.def("cr_continuity_bound", &cr_continuity_bound, "d"_a, "eps"_a);
  m.def("cf_continuity_bound", &cf_continuity_bound, "d"_a, "eps"_a);
  m.def(
      "conversion_rate_bounds",
      [](const Matrix& rho, const Matrix& sigma, int restarts, std::uint64_t seed) {
        RoofOptions o;
        o.restarts = restarts;
        o.seed = seed;
        const auto b = conversion_rate_bounds(state(rho), state(sigma), o);
        return py::make_tuple(b.lower, b.upper);
      },
      "rho"_a, "sigma"_a, "restarts"_a = 32, "seed"_a = 0);

  m.def("majorization_check", [](std::vector<double> p, std::vector<double> q) {
    return witness_dict(majorization_check(std::move(p), std::move(q)));
  }, "p"_a, "q"_a, "Tests whether p majorizes q.");
  m.def(
      "synthesize_pure_transformation",
      [](const Vector& source, const Vector& target) {
        const auto r = synthesize_pure_transformation(pure(source), pure(target));
        py::dict d = channel_dict(r.channel);
        d["witness"] = witness_dict(r.witness);
        return d;
      },
      "source"_a, "target"_a);
  m.def(
      "classify_channel", [](const std::vector<Matrix>& kraus) { return std::string(to_string(classify_channel(channel(kraus)))); },
      "kraus"_a);
  m.def(
      "apply_channel",
      [](const std::vector<Matrix>& kraus, const Matrix& rho) { return apply_channel(channel(kraus), state(rho)).matrix(); },
      "kraus"_a, "rho"_a);
  m.def("maximally_coherent", [](int d) { return maximally_coherent(d).amplitudes(); }, "d"_a);
  m.def("dephase", [](const Matrix& rho) { return dephase(state(rho)).matrix(); }, "rho"_a);
  m.def("fidelity", [](const Matrix& a, const Matrix& b) { return fidelity(state(a), state(b)); }, "rho"_a, "sigma"_a);

  m.def(
      "simulate_concentration",
      [](const Vector& psi, std::int64_t n, int trials, std::uint64_t seed) {
        return trace_dict(simulate_concentration(pure(psi), n, trials, seed));
      },
      "psi"_a, "n"_a, "trials"_a = 100, "seed"_a = 0);
  m.def(
      "simulate_dilution",
      [](const Vector& psi, std::int64_t n, double delta) { return trace_dict(simulate_dilution(pure(psi), n, delta)); },
      "psi"_a, "n"_a, "delta"_a = 0.02);
  m.def("converse_fidelity_bound", &converse_fidelity_bound, "n"_a, "R"_a, "Rtilde"_a);

  m.def(
      "is_reversible",
      [](const Matrix& rho, double threshold, int restarts, std::uint64_t seed) {
        RoofOptions o;
        o.restarts = restarts;
        o.seed = seed;
        const auto v = is_reversible(state(rho), threshold, o);
        py::list blocks;
        for (const auto& b : v.decomposition.blocks) blocks.append(py::make_tuple(b.indices, b.weight));
        return py::dict("reversible"_a = v.reversible, "gap_upper"_a = v.gap_upper, "cr"_a = v.cr,
                        "cf_upper"_a = v.cf_upper, "block_purity_defects"_a = v.block_purity_defects,
                        "residual_offblock_mass"_a = v.decomposition.residual_offblock_mass, "blocks"_a = blocks);
      },
      "rho"_a, "threshold"_a = tol::kBlockThreshold, "restarts"_a = 32, "seed"_a = 0);
  m.def("bound_coherence_check", [](const Matrix& rho) { return bound_coherence_check(state(rho)); }, "rho"_a);

  m.attr("__version__") = "0.1.0";
}
