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

#include "cohkit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cohkit/asymptotic.hpp"
#include "cohkit/incoherent.hpp"
#include "cohkit/io.hpp"
#include "cohkit/measures.hpp"
#include "cohkit/reversibility.hpp"
#include "cohkit/selftest.hpp"

namespace cohkit {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string version_text() {
  std::ostringstream s;
  s << "cohkit " << kVersion << "\n"
    << "conventions:\n"
    << "  logarithms base 2; entropies and rates in bits (per copy)\n"
    << "  fidelity F = tr sqrt(sqrt(rho) sigma sqrt(rho)); trace distance (1/2)||rho - sigma||_1\n"
    << "  coherence of formation values are optimizer upper bounds\n"
    << "tolerance defaults:\n"
    << "  hermitian " << tol::kHermitian << ", trace " << tol::kTrace << ", psd " << tol::kPsd
    << ", entropy floor " << tol::kEntropyFloor << "\n"
    << "  kraus zero " << tol::kKrausZero << ", completeness " << tol::kCompleteness << ", majorization "
    << tol::kMajorization << "\n"
    << "  block threshold " << tol::kBlockThreshold << ", purity defect " << tol::kPurityDefect
    << ", off-block residual " << tol::kOffBlockResidual << "\n"
    << "  variational gap 1e-10; overrides via --tol name=value within [1e-14, 1e-3]";
  return s.str();
}

struct Config {
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerances;
  std::string state, source, target, channel, partition, ensemble, out, which = "cr", format = "json";
  int restarts = 32;
  std::int64_t n = 1000;
  int trials = 100;
  double delta = -1.0;
  double delta2 = -1.0;
  std::vector<int> sizes = {8, 16, 32, 64};
  int subsets = 1;
  double threshold = tol::kBlockThreshold;
};

struct Tolerances {
  double threshold;
  double gap = 1e-10;
};

Tolerances parse_tolerances(const Config& c) {
  Tolerances t{c.threshold};
  auto in_range = [](const std::string& name, double v) {
    if (!(v >= 1e-14 && v <= 1e-3)) {
      throw InvariantViolation("tolerance range", name + " = " + std::to_string(v) + " outside [1e-14, 1e-3]");
    }
  };
  in_range("threshold", t.threshold);
  for (const auto& kv : c.tolerances) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvariantViolation("tolerance range", "expected name=value, got " + kv);
    const std::string name = kv.substr(0, eq);
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvariantViolation("tolerance range", "not a number: " + kv);
    }
    in_range(name, v);
    if (name == "threshold") {
      t.threshold = v;
    } else if (name == "gap") {
      t.gap = v;
    } else {
      throw InvariantViolation("tolerance range", "unknown tolerance " + name + " (known: threshold, gap)");
    }
  }
  return t;
}

std::uint64_t resolve_seed(const Config& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("COHKIT_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos, 0);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("COHKIT_SEED", std::string("not an unsigned integer: ") + env);
  }
  return 0;
}

void emit(const Json& j, const Config& c, std::ostream& out) {
  if (c.out.empty()) {
    out << dump(j);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write " + c.out);
  f << dump(j);
}

DensityMatrix load_state(const std::string& path) { return density_matrix_from_json(read_json_file(path)); }

PureState load_pure(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("amplitudes")) return pure_state_from_json(j);
  const DensityMatrix rho = density_matrix_from_json(j);
  const Spectrum s = spectrum(rho.matrix());
  const auto top = s.values.size() - 1;
  if (1.0 - s.values(top) > tol::kPurityDefect) {
    throw InvariantViolation("pure state", "state has purity defect " + std::to_string(1.0 - s.values(top)));
  }
  return PureState::normalized(s.vectors.col(top));
}

int cmd_measure(const Config& c, std::uint64_t seed, const Tolerances& t, std::ostream& out) {
  Json j{{"command", "measure"}, {"seed", seed}, {"which", c.which}};
  if (c.which == "c") {
    const auto psi = load_pure(c.state);
    j["c"] = entropy_of_coherence(psi);
  } else {
    const auto rho = load_state(c.state);
    j["dim"] = rho.dim();
    if (c.which == "cr") {
      j["cr"] = relative_entropy_of_coherence(rho);
      VariationalOptions vo;
      vo.gap_tolerance = t.gap;
      j["cr_variational"] = to_json(relative_entropy_of_coherence_variational(rho, vo));
    } else if (c.which == "cf") {
      RoofOptions o;
      o.restarts = c.restarts;
      o.seed = seed;
      const auto r = coherence_of_formation(rho, o);
      j["cf"] = r.value;
      j["cf_result"] = to_json(r);
    } else {
      throw CLI::ValidationError("--which", "expected cr, cf or c");
    }
  }
  emit(j, c, out);
  return kExitOk;
}

int cmd_transform(const Config& c, std::uint64_t seed, std::ostream& out) {
  const auto src = load_pure(c.source);
  const auto tgt = load_pure(c.target);
  Json j = to_json(synthesize_pure_transformation(src, tgt));
  j["command"] = "transform";
  j["seed"] = seed;
  emit(j, c, out);
  return kExitOk;
}

int cmd_classify(const Config& c, std::uint64_t seed, std::ostream& out) {
  const auto ch = channel_from_json(read_json_file(c.channel));
  Json j{{"command", "classify"}, {"seed", seed}};
  if (!c.partition.empty()) {
    const auto p = partition_from_json(read_json_file(c.partition));
    j["class"] = std::string(to_string(classify_channel(ch, p)));
    j["partition"] = to_json(p);
  } else {
    j["class"] = std::string(to_string(classify_channel(ch)));
  }
  j["dim_in"] = ch.dim_in();
  j["dim_out"] = ch.dim_out();
  j["kraus_count"] = ch.size();
  j["completeness_error"] = ch.completeness_error();
  emit(j, c, out);
  return kExitOk;
}

int cmd_reversibility(const Config& c, std::uint64_t seed, const Tolerances& t, std::ostream& out) {
  const auto rho = load_state(c.state);
  RoofOptions o;
  o.restarts = c.restarts;
  o.seed = seed;
  Json j = to_json(is_reversible(rho, t.threshold, o));
  j["command"] = "reversibility";
  j["seed"] = seed;
  emit(j, c, out);
  return kExitOk;
}

int emit_trace(const ProtocolTrace& trace, const char* kind, const Config& c, std::ostream& out) {
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error("cannot write " + c.out);
    write_trace_csv(f, trace);
  }
  if (c.format == "csv" && c.out.empty()) {
    write_trace_csv(out, trace);
    return kExitOk;
  }
  Json j = c.format == "json-full" ? to_json(trace) : trace_summary(trace);
  j["command"] = std::string("simulate ") + kind;
  if (trace.dilution) j["dilution"] = to_json(trace)["dilution"];
  if (trace.formation) j["formation"] = to_json(trace)["formation"];
  out << dump(j);
  return kExitOk;
}

int cmd_simulate(const std::string& kind, const Config& c, std::uint64_t seed, std::ostream& out) {
  if (kind == "concentrate") {
    return emit_trace(simulate_concentration(load_pure(c.state), c.n, c.trials, seed), "concentrate", c, out);
  }
  if (kind == "dilute") {
    const double delta = c.delta >= 0.0 ? c.delta : 0.02;
    return emit_trace(simulate_dilution(load_pure(c.state), c.n, delta, seed), "dilute", c, out);
  }
  if (kind == "form") {
    FormationOptions o;
    o.delta1 = c.delta >= 0.0 ? c.delta : 0.01;
    o.delta2 = c.delta2 >= 0.0 ? c.delta2 : o.delta1;
    o.trials = c.trials;
    o.seed = seed;
    o.member_fidelity = c.n <= 100000;
    RoofOptions roof;
    roof.restarts = c.restarts;
    roof.seed = seed;
    const auto trace = c.ensemble.empty() ? simulate_formation(load_state(c.state), c.n, o, roof)
                                          : simulate_formation(ensemble_from_json(read_json_file(c.ensemble)), c.n, o);
    return emit_trace(trace, "form", c, out);
  }
  // cover
  Ensemble ens = [&] {
    if (!c.ensemble.empty()) return ensemble_from_json(read_json_file(c.ensemble));
    RoofOptions roof;
    roof.restarts = c.restarts;
    roof.seed = seed;
    return coherence_of_formation(load_state(c.state), roof).ensemble;
  }();
  const auto trend = covering_trend(ens, static_cast<int>(c.n), c.sizes, c.trials, seed, c.subsets);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error("cannot write " + c.out);
    f.precision(17);
    f << "S,index,deviation,seed\n";
    for (const auto& r : trend.reports) {
      for (std::size_t k = 0; k < r.deviations.size(); ++k) f << r.S << ',' << k << ',' << r.deviations[k] << ',' << r.seed << '\n';
    }
  }
  Json reports = Json::array();
  for (const auto& r : trend.reports) {
    Json rj = to_json(r);
    if (c.format != "json-full") rj.erase("deviations");
    reports.push_back(std::move(rj));
  }
  out << dump(Json{{"command", "simulate cover"},
                   {"seed", seed},
                   {"n", c.n},
                   {"trials", c.trials},
                   {"medians", trend.medians},
                   {"p_values", trend.p_values},
                   {"decreasing", trend.decreasing},
                   {"reports", std::move(reports)}});
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational resource theory of coherence: measures, synthesis, protocols, reversibility.",
               "cohkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_text());
  Config c;
  std::uint64_t seed_value = 0;
  std::vector<CLI::Option*> seed_options;
  auto add_seed = [&](CLI::App* sub) {
    seed_options.push_back(sub->add_option("--seed", seed_value, "Random seed (falls back to $COHKIT_SEED, then 0)"));
    sub->add_option("--tol", c.tolerances, "Tolerance override name=value (threshold, gap)");
  };

  auto* measure = app.add_subcommand("measure", "Coherence measures of a state");
  measure->add_option("--state", c.state, "State JSON")->required();
  measure->add_option("--which", c.which, "cr | cf | c")->check(CLI::IsMember({"cr", "cf", "c"}));
  measure->add_option("--restarts", c.restarts, "Convex-roof restarts")->check(CLI::PositiveNumber);
  measure->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  add_seed(measure);

  auto* transform = app.add_subcommand("transform", "Synthesize a strictly incoherent pure-state transformation");
  transform->add_option("--source", c.source, "Source pure state JSON")->required();
  transform->add_option("--target", c.target, "Target pure state JSON")->required();
  transform->add_option("--out", c.out, "Write the channel JSON here instead of stdout");
  add_seed(transform);

  auto* simulate = app.add_subcommand("simulate", "Finite-n protocol simulation");
  simulate->require_subcommand(1);
  std::string kind;
  for (const char* k : {"concentrate", "dilute", "form", "cover"}) {
    auto* s = simulate->add_subcommand(k);
    s->add_option("--state", c.state, "State JSON");
    s->add_option("--n", c.n, "Number of copies")->check(CLI::PositiveNumber);
    s->add_option("--trials", c.trials, "Trials")->check(CLI::PositiveNumber);
    s->add_option("--delta", c.delta, "Typicality slack (dilute: delta; form: delta1)")->check(CLI::NonNegativeNumber);
    s->add_option("--out", c.out, "CSV output");
    s->add_option("--format", c.format, "json | json-full | csv")->check(CLI::IsMember({"json", "json-full", "csv"}));
    s->add_option("--restarts", c.restarts, "Convex-roof restarts when an ensemble is derived")->check(CLI::PositiveNumber);
    if (std::string(k) == "form" || std::string(k) == "cover") {
      s->add_option("--ensemble", c.ensemble, "Ensemble JSON (instead of deriving one from --state)");
    }
    if (std::string(k) == "form") s->add_option("--delta2", c.delta2, "Member dilution slack")->check(CLI::NonNegativeNumber);
    if (std::string(k) == "cover") {
      s->add_option("--sizes", c.sizes, "Subset sizes S")->delimiter(',');
      s->add_option("--subsets", c.subsets, "Subsets evaluated per trial (0: all)")->check(CLI::NonNegativeNumber);
    }
    add_seed(s);
    s->callback([&kind, k] { kind = k; });
  }

  auto* classify = app.add_subcommand("classify", "Classify a Kraus channel");
  classify->add_option("--channel", c.channel, "Channel JSON")->required();
  classify->add_option("--partition", c.partition, "Partition JSON");
  classify->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  add_seed(classify);

  auto* rev = app.add_subcommand("reversibility", "Reversibility verdict and block decomposition");
  rev->add_option("--state", c.state, "State JSON")->required();
  rev->add_option("--threshold", c.threshold, "Block-graph edge threshold");
  rev->add_option("--restarts", c.restarts, "Convex-roof restarts")->check(CLI::PositiveNumber);
  rev->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  add_seed(rev);

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  add_seed(selftest);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::Success& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      app.exit(e, out, err);
      return kExitUsage;
    }
    for (const auto* o : seed_options) {
      if (o->count() > 0) c.seed = seed_value;
    }
    const std::uint64_t seed = resolve_seed(c);
    const Tolerances t = parse_tolerances(c);

    if (measure->parsed()) return cmd_measure(c, seed, t, out);
    if (transform->parsed()) return cmd_transform(c, seed, out);
    if (classify->parsed()) return cmd_classify(c, seed, out);
    if (rev->parsed()) return cmd_reversibility(c, seed, t, out);
    if (simulate->parsed()) {
      if (kind != "cover" && c.state.empty()) throw CLI::RequiredError("--state");
      if (kind == "cover" && c.state.empty() && c.ensemble.empty()) throw CLI::RequiredError("--state or --ensemble");
      return cmd_simulate(kind, c, seed, out);
    }
    if (selftest->parsed()) {
      const auto report = run_selftest(seed);
      out << format_selftest(report);
      return report.passed() ? kExitOk : kExitInvariant;
    }
    return kExitUsage;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const TransformationImpossible& e) {
    err << "transformation impossible: " << e.what() << "\n";
    out << dump(Json{{"error", "transformation impossible"}, {"witness", to_json(e.witness())}});
    return kExitImpossible;
  } catch (const InvariantViolation& e) {
    err << "invariant violated [" << e.invariant() << "]: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace cohkit
