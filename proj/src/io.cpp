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

#include "qfix/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qfix::io {

namespace {

// Runs a decoder, turning JSON type and key errors into ValidationError.
template <class F>
auto guarded(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key, std::string_view what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  if (!j.contains(key)) throw ValidationError(std::string(what) + " is missing \"" + key + "\"");
  return j.at(key);
}

Json real_vector(const RealVector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

RealVector real_vector_from(const Json& j, std::string_view what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of numbers");
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const RealVector>(v.data(), Index(v.size()));
}

Json real_rows(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(real_vector(m.row(i).transpose()));
  return rows;
}

RealMatrix real_rows_from(const Json& j, std::string_view what) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + " must be a non-empty 2-D array");
  const Index rows = Index(j.size());
  const Index cols = Index(j.front().size());
  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const RealVector r = real_vector_from(j[std::size_t(i)], what);
    if (r.size() != cols) throw ValidationError(std::string(what) + " has ragged rows");
    m.row(i) = r.transpose();
  }
  return m;
}

}  // namespace

void reject_unknown_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!obj.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ValidationError(std::string(what) + ": unknown key \"" + item.key() + "\"");
  }
}

Json to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    reject_unknown_keys(j, {"rows", "cols", "re", "im", "d_in", "d_out"}, "matrix");
    const auto rows = field(j, "rows", "matrix").get<Index>();
    const auto cols = field(j, "cols", "matrix").get<Index>();
    if (rows < 1 || cols < 1) throw ValidationError("matrix: rows and cols must be positive");
    const auto re = field(j, "re", "matrix").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (re.size() != std::size_t(rows * cols) || im.size() != re.size())
      throw ValidationError("matrix: entry count differs from rows x cols");
    ComplexMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) {
        const std::size_t k = std::size_t(r * cols + c);
        m(r, c) = Complex(re[k], im[k]);
      }
    if (!all_finite(m)) throw ValidationError("matrix: entries must be finite");
    return m;
  });
}

HermitianOperator hermitian_from_json(const Json& j) { return HermitianOperator(matrix_from_json(j)); }

DensityMatrix density_from_json(const Json& j) { return DensityMatrix(hermitian_from_json(j)); }

Json to_json(const ChoiMatrix& c) {
  Json j;
  j["d_in"] = c.d_in();
  j["d_out"] = c.d_out();
  const Json m = to_json(c.matrix());
  for (const auto& item : m.items()) j[item.key()] = item.value();
  return j;
}

ChoiMatrix choi_from_json(const Json& j) {
  return guarded("choi", [&] {
    const auto d_in = field(j, "d_in", "choi").get<Index>();
    const auto d_out = field(j, "d_out", "choi").get<Index>();
    return ChoiMatrix(d_in, d_out, hermitian_from_json(j));
  });
}

Json to_json(const CptpReport& r) {
  return Json{{"cp", r.cp}, {"tp", r.tp}, {"min_eig", r.min_eig}, {"tp_residual", r.tp_residual}};
}

Json to_json(const FixedPointSet& f) {
  Json states = Json::array();
  for (const auto& s : f.states) states.push_back(to_json(s.matrix()));
  Json spectrum = Json::array();
  for (const auto& z : f.peripheral_spectrum) spectrum.push_back({z.real(), z.imag()});
  return Json{{"fixed_space_dim", f.fixed_space_dim},
              {"states", states},
              {"eigenvalue_residuals", f.eigenvalue_residuals},
              {"peripheral_spectrum", spectrum}};
}

Json to_json(const engineer::ValidityLedger& ledger) {
  Json out = Json::array();
  for (const auto& c : ledger)
    out.push_back(Json{{"name", c.name},
                       {"relation", c.relation},
                       {"value", c.value},
                       {"threshold", c.threshold},
                       {"passed", c.passed},
                       {"skipped", c.skipped},
                       {"blocking", c.blocking}});
  return out;
}

Json to_json(const engineer::DiscriminationResult& r) {
  Json proj = Json::array();
  for (const auto& p : r.projectors) proj.push_back(to_json(p.matrix()));
  Json j{{"feasible", r.feasible},
         {"success", r.success},
         {"ranks", r.ranks},
         {"kernel_dims", r.kernel_dims},
         {"projectors", proj}};
  j["failed_index"] = r.failed_index ? Json(*r.failed_index) : Json(nullptr);
  j["reason"] = r.reason;
  return j;
}

Json to_json(const engineer::SdpChannel& c) {
  return Json{{"x", to_json(c.x)},
              {"choi", to_json(c.c)},
              {"contraction", c.contraction},
              {"contraction_warning", c.contraction_warning},
              {"residual_norm", c.residual_norm},
              {"solution", to_json(c.solution)}};
}

Json to_json(const sdp::SdpProblem& p) {
  Json cons = Json::array();
  for (const auto& c : p.constraints) cons.push_back(Json{{"a", to_json(c.a.matrix())}, {"b", c.b}});
  return Json{{"n", p.n}, {"objective", to_json(p.objective.matrix())}, {"constraints", cons}};
}

sdp::SdpProblem sdp_problem_from_json(const Json& j) {
  return guarded("sdp problem", [&] {
    reject_unknown_keys(j, {"n", "objective", "constraints"}, "sdp problem");
    sdp::SdpProblem p;
    p.n = field(j, "n", "sdp problem").get<Index>();
    p.objective = j.contains("objective") ? hermitian_from_json(j.at("objective")) : HermitianOperator::identity(p.n);
    for (const auto& c : field(j, "constraints", "sdp problem")) {
      reject_unknown_keys(c, {"a", "b"}, "sdp constraint");
      p.constraints.push_back({hermitian_from_json(field(c, "a", "sdp constraint")),
                               field(c, "b", "sdp constraint").get<double>()});
    }
    p.validate();
    return p;
  });
}

Json to_json(const sdp::SdpSolution& s) {
  Json j{{"status", sdp::to_string(s.status)},
         {"objective_value", s.objective_value},
         {"primal_residual", s.primal_residual},
         {"dual_residual", s.dual_residual},
         {"gap", s.gap},
         {"iterations", s.iterations},
         {"rank", s.rank},
         {"face_dim", s.face_dim},
         {"x", to_json(s.x.matrix())},
         {"dual", s.dual}};
  j["certificate"] = s.certificate ? Json(*s.certificate) : Json(nullptr);
  j["message"] = s.message;
  return j;
}

Json to_json(const quasireal::QuasiRealization& q) {
  Json d = Json::array();
  for (const auto& m : q.d_maps) d.push_back(real_rows(m));
  return Json{{"dim", q.dim}, {"alphabet", q.alphabet}, {"D", d}, {"pi", real_vector(q.pi)}, {"tau", real_vector(q.tau)}};
}

quasireal::QuasiRealization quasi_from_json(const Json& j) {
  return guarded("quasi-realization", [&] {
    reject_unknown_keys(j, {"dim", "alphabet", "D", "pi", "tau"}, "quasi-realization");
    quasireal::QuasiRealization q;
    q.dim = field(j, "dim", "quasi-realization").get<Index>();
    q.alphabet = field(j, "alphabet", "quasi-realization").get<std::vector<std::string>>();
    for (const auto& m : field(j, "D", "quasi-realization")) q.d_maps.push_back(real_rows_from(m, "D"));
    q.pi = real_vector_from(field(j, "pi", "quasi-realization"), "pi");
    q.tau = real_vector_from(field(j, "tau", "quasi-realization"), "tau");
    q.validate();
    return q;
  });
}

Json to_json(const quasireal::PositivityReport& r) {
  return Json{{"nonneg", r.nonneg}, {"stochastic", r.stochastic}, {"stationary", r.stationary}, {"tau_ones", r.tau_ones}};
}

Json to_json(const quasireal::DharmadhikariReport& r) {
  return Json{{"tau_in_cone", r.tau_in_cone},
              {"maps_preserve_cone", r.maps_preserve_cone},
              {"pi_in_dual", r.pi_in_dual},
              {"pointed", r.pointed},
              {"detail", r.detail}};
}

quasireal::PolyhedralCone cone_from_json(const Json& j) {
  return guarded("cone", [&] {
    reject_unknown_keys(j, {"generators"}, "cone");
    quasireal::PolyhedralCone c;
    for (const auto& g : field(j, "generators", "cone")) c.generators.push_back(real_vector_from(g, "generator"));
    c.validate();
    return c;
  });
}

conesim::SimulationConfig sim_config_from_json(const Json& j, DensityMatrix& rho0) {
  return guarded("simulation config", [&] {
    reject_unknown_keys(
        j, {"channel", "kick", "n_iter", "n_rounds", "classify_tol", "seed", "rho0", "collapse", "fp_tol"},
        "simulation config");
    conesim::SimulationConfig c;
    c.channel = choi_from_json(field(j, "channel", "simulation config"));
    const Json& kick = field(j, "kick", "simulation config");
    reject_unknown_keys(kick, {"type", "strength", "choi"}, "kick");
    const auto type = field(kick, "type", "kick").get<std::string>();
    if (type == "depolarizing") {
      c.kick = conesim::KickPolicy::depolarizing(field(kick, "strength", "kick").get<double>());
    } else if (type == "haar") {
      c.kick = conesim::KickPolicy::haar_unitary();
    } else if (type == "fixed") {
      c.kick = conesim::KickPolicy::fixed(choi_from_json(field(kick, "choi", "kick")));
    } else {
      throw ValidationError("kick: type must be depolarizing, haar or fixed");
    }
    c.n_iter = j.value("n_iter", c.n_iter);
    c.n_rounds = j.value("n_rounds", c.n_rounds);
    c.classify_tol = j.value("classify_tol", c.classify_tol);
    c.seed = j.value("seed", c.seed);
    c.collapse = j.value("collapse", c.collapse);
    c.fp_tol = j.value("fp_tol", c.fp_tol);
    rho0 = j.contains("rho0") ? density_from_json(j.at("rho0")) : DensityMatrix::maximally_mixed(c.channel.d_in());
    c.validate();
    return c;
  });
}

Json to_json(const conesim::Round& r) {
  Json j;
  j["round"] = r.index;
  j["symbol"] = r.symbol ? Json(*r.symbol) : Json(nullptr);
  j["settle_steps"] = r.settle_steps;
  j["converged"] = r.converged;
  j["distance"] = r.distance;
  j["weights"] = r.weights;
  j["settled_state"] = to_json(r.settled_state.matrix());
  j["post_kick_state"] = to_json(r.post_kick_state.matrix());
  return j;
}

std::optional<std::size_t> symbol_from_record(const Json& record) {
  return guarded("trajectory record", [&]() -> std::optional<std::size_t> {
    const Json& s = field(record, "symbol", "trajectory record");
    if (s.is_null()) return std::nullopt;
    return s.get<std::size_t>();
  });
}

Json to_json(const conesim::EmpiricalProcess& e) {
  return Json{{"symbols", e.symbols},
              {"counts", real_rows(e.counts)},
              {"transition", real_rows(e.transition)},
              {"stationary", real_vector(e.stationary)}};
}

std::string to_csv(const ComplexMatrix& m) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ',';
      os << m(r, c).real() << ',' << m(r, c).imag();
    }
    os << '\n';
  }
  return os.str();
}

Json parse(const std::string& text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

}  // namespace qfix::io
