// Copyright 2026 The qfix Authors
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

#pragma once

// JSON and CSV forms of every value the command-line tool reads or writes.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qfix/channel.hpp"
#include "qfix/conesim.hpp"
#include "qfix/engineer.hpp"
#include "qfix/quasireal.hpp"
#include "qfix/sdp.hpp"

namespace qfix::io {

using Json = nlohmann::ordered_json;

/// Throws ValidationError naming the first key of obj outside allowed.
void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what);

// {"rows","cols","re","im"}, row-major; "im" may be omitted for real data.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
HermitianOperator hermitian_from_json(const Json& j);
DensityMatrix density_from_json(const Json& j);

// Matrix form plus {"d_in","d_out"}.
Json to_json(const ChoiMatrix& c);
ChoiMatrix choi_from_json(const Json& j);

Json to_json(const CptpReport& r);
Json to_json(const FixedPointSet& f);

Json to_json(const engineer::ValidityLedger& ledger);
Json to_json(const engineer::DiscriminationResult& r);
Json to_json(const engineer::SdpChannel& c);

Json to_json(const sdp::SdpProblem& p);
sdp::SdpProblem sdp_problem_from_json(const Json& j);
Json to_json(const sdp::SdpSolution& s);

// {"dim","alphabet","D","pi","tau"} with D one row-major 2-D array per symbol.
Json to_json(const quasireal::QuasiRealization& q);
quasireal::QuasiRealization quasi_from_json(const Json& j);
Json to_json(const quasireal::PositivityReport& r);
Json to_json(const quasireal::DharmadhikariReport& r);
// {"generators": [[...], ...]}
quasireal::PolyhedralCone cone_from_json(const Json& j);

/// {"channel","kick","n_iter","n_rounds","classify_tol","seed","rho0","collapse","fp_tol"};
/// returns the initial state through rho0 (maximally mixed when absent).
conesim::SimulationConfig sim_config_from_json(const Json& j, DensityMatrix& rho0);
/// One JSONL record; symbol is null for unclassified rounds.
Json to_json(const conesim::Round& r);
std::optional<std::size_t> symbol_from_record(const Json& record);
Json to_json(const conesim::EmpiricalProcess& e);

/// Rows of interleaved re,im columns.
std::string to_csv(const ComplexMatrix& m);

/// Parses text, converting parser errors to ValidationError.
Json parse(const std::string& text, std::string_view what);
Json read_file(const std::string& path);

}  // namespace qfix::io
