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

#include "cohkit/io.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cohkit {
namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double num(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

Json real_vector(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json stats(const std::vector<double>& v) {
  double mean = 0.0;
  int finite = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      mean += x;
      ++finite;
    }
  }
  if (finite == 0) return Json{{"mean", nullptr}, {"std", nullptr}, {"min", nullptr}};
  mean /= finite;
  double ss = 0.0;
  double lo = INFINITY;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    ss += (x - mean) * (x - mean);
    lo = std::min(lo, x);
  }
  return Json{{"mean", mean}, {"std", finite > 1 ? std::sqrt(ss / (finite - 1)) : 0.0}, {"min", lo}};
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {num(j[0], where + "[0]"), num(j[1], where + "[1]")};
  if (j.is_object()) {
    return {num(field(j, "re", where), where + ".re"), j.contains("im") ? num(j["im"], where + ".im") : 0.0};
  }
  throw ParseError(where + ": expected a number, [re, im] or {\"re\", \"im\"}");
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ParseError(where + "[0]: expected an array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto rw = where + "[" + std::to_string(r) + "]";
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError(rw + ": expected an array");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvariantViolation("rectangular", rw + " has " + std::to_string(row.size()) + " entries, expected " +
                                                  std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

DensityMatrix density_matrix_from_json(const Json& j) {
  if (j.is_object() && j.contains("amplitudes")) return DensityMatrix::from_pure(pure_state_from_json(j));
  const Matrix m = matrix_from_json(field(j, "matrix", "state"), "state.matrix");
  if (j.contains("dim") && int_field(j, "dim", "state") != m.rows()) {
    throw InvariantViolation("dimension", "\"dim\" = " + std::to_string(j["dim"].get<int>()) +
                                              " but matrix has " + std::to_string(m.rows()) + " rows");
  }
  return DensityMatrix(m);
}

PureState pure_state_from_json(const Json& j) {
  const Json& a = field(j, "amplitudes", "state");
  if (!a.is_array() || a.empty()) throw ParseError("state.amplitudes: expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(a[i], "state.amplitudes[" + std::to_string(i) + "]");
  }
  if (j.contains("dim") && int_field(j, "dim", "state") != v.size()) {
    throw InvariantViolation("dimension", "\"dim\" does not match the number of amplitudes");
  }
  return PureState(v);
}

BasisPartition partition_from_json(const Json& j) {
  const int dim = int_field(j, "dim", "partition");
  const Json& b = field(j, "blocks", "partition");
  if (!b.is_array()) throw ParseError("partition.blocks: expected an array");
  std::vector<std::vector<int>> blocks;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!b[k].is_array()) throw ParseError("partition.blocks[" + std::to_string(k) + "]: expected an array");
    std::vector<int> blk;
    for (const auto& x : b[k]) {
      if (!x.is_number_integer()) throw ParseError("partition.blocks: indices must be integers");
      blk.push_back(x.get<int>());
    }
    blocks.push_back(std::move(blk));
  }
  return BasisPartition(dim, std::move(blocks));
}

IncoherentChannel channel_from_json(const Json& j) {
  const Json& ks = field(j, "kraus", "channel");
  if (!ks.is_array() || ks.empty()) throw ParseError("channel.kraus: expected a nonempty array");
  const Json* certs = j.contains("certificates") ? &j["certificates"] : nullptr;
  if (certs && (!certs->is_array() || certs->size() != ks.size())) {
    throw ParseError("channel.certificates: expected one entry per Kraus operator");
  }
  std::vector<KrausOperator> ops;
  for (std::size_t k = 0; k < ks.size(); ++k) {
    const auto where = "channel.kraus[" + std::to_string(k) + "]";
    Matrix m = matrix_from_json(ks[k], where);
    if (certs && !(*certs)[k].is_null()) {
      const Json& c = (*certs)[k];
      const auto cw = "channel.certificates[" + std::to_string(k) + "]";
      IncoherenceCertificate cert;
      for (const auto& x : field(c, "j", cw)) cert.j.push_back(x.get<int>());
      const Json& cc = field(c, "c", cw);
      for (std::size_t i = 0; i < cc.size(); ++i) cert.c.push_back(complex_from_json(cc[i], cw + ".c"));
      ops.emplace_back(std::move(m), std::move(cert));
    } else {
      ops.emplace_back(std::move(m));
    }
  }
  IncoherentChannel ch(std::move(ops));
  if (j.contains("dim_in") && int_field(j, "dim_in", "channel") != ch.dim_in()) {
    throw InvariantViolation("dimension", "\"dim_in\" does not match the Kraus operators");
  }
  if (j.contains("dim_out") && int_field(j, "dim_out", "channel") != ch.dim_out()) {
    throw InvariantViolation("dimension", "\"dim_out\" does not match the Kraus operators");
  }
  return ch;
}

Ensemble ensemble_from_json(const Json& j) {
  const Json& ms = field(j, "members", "ensemble");
  if (!ms.is_array() || ms.empty()) throw ParseError("ensemble.members: expected a nonempty array");
  std::vector<double> w;
  std::vector<PureState> members;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto where = "ensemble.members[" + std::to_string(k) + "]";
    w.push_back(num(field(ms[k], "weight", where), where + ".weight"));
    members.push_back(pure_state_from_json(ms[k]));
  }
  return Ensemble(std::move(w), std::move(members));
}

// ---------------------------------------------------------------------------

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const DensityMatrix& rho) { return Json{{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}}; }

Json to_json(const PureState& psi) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) a.push_back(to_json(psi.amplitudes()(i)));
  return Json{{"dim", psi.dim()}, {"amplitudes", std::move(a)}};
}

Json to_json(const BasisPartition& p) { return Json{{"dim", p.dim()}, {"blocks", p.blocks()}}; }

Json to_json(const Ensemble& e) {
  Json members = Json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    Json m = to_json(e.members()[i]);
    m["weight"] = e.weights()[i];
    members.push_back(std::move(m));
  }
  return Json{{"size", e.size()}, {"members", std::move(members)}};
}

Json to_json(const ConvexRoofResult& r) {
  return Json{{"value", r.value},
              {"kind", "upper bound"},
              {"restarts", r.restarts},
              {"converged", r.converged},
              {"seed", r.seed},
              {"restart_values", r.restart_values},
              {"ensemble", to_json(r.ensemble)}};
}

Json to_json(const VariationalResult& r) {
  return Json{{"value", r.value}, {"minimizer", r.minimizer}, {"iterations", r.iterations}, {"gap", r.gap}};
}

Json to_json(const MajorizationWitness& w) {
  Json j{{"holds", w.holds}, {"source_spectrum", w.source_spectrum}, {"target_spectrum", w.target_spectrum}};
  if (w.holds) {
    if (w.bistochastic) {
      Json d = Json::array();
      for (Eigen::Index r = 0; r < w.bistochastic->rows(); ++r) {
        d.push_back(real_vector(w.bistochastic->row(r).transpose()));
      }
      j["bistochastic"] = std::move(d);
    }
    Json b = Json::array();
    for (const auto& t : w.birkhoff) b.push_back(Json{{"weight", t.weight}, {"perm", t.perm}});
    j["birkhoff"] = std::move(b);
  } else {
    j["first_violation"] = w.first_violation;
    j["violation"] = w.violation;
    std::vector<double> ps, qs;
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < w.source_spectrum.size(); ++k) {
      a += w.source_spectrum[k];
      b += k < w.target_spectrum.size() ? w.target_spectrum[k] : 0.0;
      ps.push_back(a);
      qs.push_back(b);
    }
    j["source_partial_sums"] = ps;
    j["target_partial_sums"] = qs;
  }
  return j;
}

Json to_json(const IncoherentChannel& ch) {
  Json kraus = Json::array();
  Json certs = Json::array();
  for (const auto& k : ch.kraus()) {
    kraus.push_back(to_json(k.matrix()));
    if (k.certificate()) {
      Json c = Json::array();
      for (auto z : k.certificate()->c) c.push_back(to_json(z));
      certs.push_back(Json{{"j", k.certificate()->j}, {"c", std::move(c)}});
    } else {
      certs.push_back(nullptr);
    }
  }
  return Json{{"dim_in", ch.dim_in()},
              {"dim_out", ch.dim_out()},
              {"class", std::string(to_string(ch.class_label()))},
              {"completeness_error", ch.completeness_error()},
              {"kraus", std::move(kraus)},
              {"certificates", std::move(certs)}};
}

Json to_json(const SynthesisResult& s) {
  Json j = to_json(s.channel);
  j["birkhoff"] = to_json(s.witness)["birkhoff"];
  j["witness"] = to_json(s.witness);
  j["source_phases"] = real_vector(s.source_phases);
  j["target_phases"] = real_vector(s.target_phases);
  return j;
}

Json trace_summary(const ProtocolTrace& t) {
  const Json r = stats(t.rates);
  const Json f = stats(t.fidelity);
  return Json{{"n", t.n},
              {"trials", t.trials},
              {"seed", t.seed},
              {"mean_rate", t.mean_rate},
              {"std_rate", t.rate_stddev},
              {"target_rate", t.target_rate},
              {"mean_fidelity", f["mean"]},
              {"min_fidelity", f["min"]},
              {"min_rate", r["min"]}};
}

Json to_json(const ProtocolTrace& t) {
  Json j = trace_summary(t);
  j["rates"] = t.rates;
  Json fid = Json::array();
  for (double f : t.fidelity) fid.push_back(std::isfinite(f) ? Json(f) : Json(nullptr));
  j["fidelity"] = std::move(fid);
  j["trial_seeds"] = t.trial_seeds;
  if (!t.outcomes.empty()) {
    Json o = Json::array();
    for (const auto& x : t.outcomes) {
      o.push_back(Json{{"type_counts", x.type_counts},
                       {"probability", x.probability},
                       {"log_class_size", x.log_class_size},
                       {"achieved_rate", x.achieved_rate}});
    }
    j["outcomes"] = std::move(o);
  }
  if (t.dilution) {
    j["dilution"] = Json{{"delta", t.dilution->delta},
                         {"typical_probability", t.dilution->typical_probability},
                         {"pruned_mass", t.dilution->pruned_mass},
                         {"nodes", t.dilution->nodes}};
  }
  if (t.formation) {
    const auto& f = *t.formation;
    Json fj{{"delta1", f.delta1}, {"delta2", f.delta2}, {"ensemble_size", f.ensemble_size},
            {"reconstructed", f.reconstructed}};
    if (f.reconstructed) {
      fj["typical_label_mass"] = f.typical_label_mass;
      fj["reconstruction_fidelity"] = f.reconstruction_fidelity;
      fj["fidelity_lower_bound"] = f.fidelity_lower_bound;
    }
    j["formation"] = std::move(fj);
  }
  return j;
}

Json to_json(const CoveringCheckReport& r) {
  Json table = Json::array();
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    table.push_back(Json{{"eps", r.epsilons[k]}, {"fraction_good", r.fraction_good[k]}});
  }
  return Json{{"S", r.S},           {"M", r.M},
              {"class_size", r.class_size}, {"type_counts", r.type_counts},
              {"seed", r.seed},     {"median", r.median},
              {"fraction_good", std::move(table)}, {"deviations", r.deviations}};
}

Json to_json(const ReversibilityVerdict& v) {
  Json blocks = Json::array();
  for (std::size_t k = 0; k < v.decomposition.blocks.size(); ++k) {
    const auto& b = v.decomposition.blocks[k];
    Json bj{{"indices", b.indices}, {"weight", b.weight}, {"purity_defect", v.block_purity_defects[k]}};
    if (b.state) bj["state"] = to_json(*b.state)["matrix"];
    blocks.push_back(std::move(bj));
  }
  return Json{{"reversible", v.reversible},
              {"threshold", v.decomposition.threshold},
              {"residual_offblock_mass", v.decomposition.residual_offblock_mass},
              {"block_purity_defects", v.block_purity_defects},
              {"cr", v.cr},
              {"cf_upper", v.cf_upper},
              {"cf_converged", v.cf_converged},
              {"gap_upper", v.gap_upper},
              {"blocks", std::move(blocks)}};
}

void write_trace_csv(std::ostream& out, const ProtocolTrace& t) {
  out << "trial,n,rate,fidelity,seed\n";
  std::ostringstream row;
  row.precision(17);
  for (std::size_t k = 0; k < t.rates.size(); ++k) {
    row.str("");
    row << k << ',' << t.n << ',' << t.rates[k] << ',';
    if (std::isfinite(t.fidelity[k])) row << t.fidelity[k];
    row << ',' << t.trial_seeds[k] << '\n';
    out << row.str();
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cohkit
