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

// JSON interchange.
//
//   state      {"dim": d, "matrix": [[z, ...], ...]}   or   {"dim": d, "amplitudes": [z, ...]}
//   partition  {"dim": d, "blocks": [[0, 1], [2], ...]}
//   ensemble   {"members": [{"weight": w, "amplitudes": [z, ...]}, ...]}
//   channel    {"dim_in": a, "dim_out": b, "kraus": [matrix, ...],
//               "certificates": [{"j": [...], "c": [z, ...]}, ...]}   (certificates optional)
//
// A complex entry z is a number, [re, im], or {"re": x, "im": y}. Output
// always uses the object form.

#ifndef COHKIT_IO_HPP_
#define COHKIT_IO_HPP_

#include <ostream>
#include <string>

#include "cohkit/asymptotic.hpp"
#include "cohkit/incoherent.hpp"
#include "cohkit/measures.hpp"
#include "cohkit/qstate.hpp"
#include "cohkit/reversibility.hpp"
#include "json.hpp"

namespace cohkit {

using Json = nlohmann::ordered_json;

/// Malformed input: not JSON, or JSON of the wrong shape. what() carries the
/// location (byte offset or JSON path).
class ParseError : public Error {
 public:
  using Error::Error;
};

Json read_json_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& origin = "<input>");

Complex complex_from_json(const Json& j, const std::string& where);
Matrix matrix_from_json(const Json& j, const std::string& where);

/// Accepts either the "matrix" or the "amplitudes" form.
DensityMatrix density_matrix_from_json(const Json& j);
PureState pure_state_from_json(const Json& j);
BasisPartition partition_from_json(const Json& j);
IncoherentChannel channel_from_json(const Json& j);
/// {"members": [{"weight": w, "amplitudes": [...]}, ...]}, as written by to_json(Ensemble).
Ensemble ensemble_from_json(const Json& j);

Json to_json(Complex z);
Json to_json(const Matrix& m);
Json to_json(const DensityMatrix& rho);
Json to_json(const PureState& psi);
Json to_json(const BasisPartition& p);
Json to_json(const Ensemble& e);
Json to_json(const ConvexRoofResult& r);
Json to_json(const VariationalResult& r);
Json to_json(const MajorizationWitness& w);
Json to_json(const IncoherentChannel& ch);
Json to_json(const SynthesisResult& s);
Json to_json(const ProtocolTrace& t);
Json to_json(const CoveringCheckReport& r);
Json to_json(const ReversibilityVerdict& v);

/// Summary of a trace: n, trials, mean/std of rate and fidelity, target, seed.
Json trace_summary(const ProtocolTrace& t);
/// CSV rows: trial,n,rate,fidelity,seed
void write_trace_csv(std::ostream& out, const ProtocolTrace& t);

/// Serialization used for every report: 2-space indent, doubles in
/// shortest round-trip form (exact), non-finite numbers written as null.
std::string dump(const Json& j);

}  // namespace cohkit

#endif  // COHKIT_IO_HPP_
