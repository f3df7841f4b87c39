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

// qfix: command-line front end for channel engineering, fixed-point
// analysis, SDP solving, quasi-realizations and cone simulation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qfix/demo.hpp"
#include "qfix/io.hpp"

using namespace qfix;
using io::Json;

namespace {

enum ExitCode { kOk = 0, kGeneric = 1, kValidation = 2, kInfeasible = 3, kNumericalLimit = 4 };

struct Globals {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

Globals g;

void emit_text(const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ValidationError("cannot write " + g.out);
  f << text;
}

void emit(const Json& j) { emit_text(j.dump(2) + "\n"); }

bool csv() { return g.format == "csv"; }

void no_csv(const char* command) {
  if (csv()) throw ValidationError(std::string(command) + " has no CSV form; use --format json");
}

std::vector<DensityMatrix> read_states(const std::vector<std::string>& paths) {
  std::vector<DensityMatrix> out;
  for (const auto& p : paths) out.push_back(io::density_from_json(io::read_file(p)));
  return out;
}

DensityMatrix read_b_or_default(const std::string& path, Index dim) {
  return path.empty() ? DensityMatrix::maximally_mixed(dim) : io::density_from_json(io::read_file(path));
}

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.size() != expected)
    throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

// channel ------------------------------------------------------------------

void add_channel(CLI::App& app) {
  auto* channel = app.add_subcommand("channel", "Inspect channels given in Choi form");
  channel->require_subcommand(1);

  static std::string choi_path, rho_path;
  static double psd_tol = tol::kPsd, tp_tol = tol::kTp, fp_tol = tol::kFixedPoint;
  static int steps = 10;

  auto* check = channel->add_subcommand("check", "Report complete positivity and trace preservation");
  check->add_option("--choi", choi_path, "Choi matrix JSON")->required();
  check->add_option("--psd-tol", psd_tol)->check(CLI::PositiveNumber);
  check->add_option("--tp-tol", tp_tol)->check(CLI::PositiveNumber);
  check->callback([] {
    no_csv("channel check");
    emit(io::to_json(is_cptp(io::choi_from_json(io::read_file(choi_path)), psd_tol, tp_tol)));
  });

  auto* fp = channel->add_subcommand("fixed-points", "Extract fixed states and the peripheral spectrum");
  fp->add_option("--choi", choi_path, "Choi matrix JSON")->required();
  fp->add_option("--fp-tol", fp_tol)->check(CLI::PositiveNumber);
  fp->callback([] {
    const FixedPointSet set = fixed_points(io::choi_from_json(io::read_file(choi_path)), fp_tol);
    if (!csv()) return emit(io::to_json(set));
    std::string text;
    for (const auto& s : set.states) text += io::to_csv(s.matrix()) + "\n";
    emit_text(text);
  });

  auto* it = channel->add_subcommand("iterate", "Apply a channel repeatedly to a state");
  it->add_option("--choi", choi_path, "Choi matrix JSON")->required();
  it->add_option("--rho", rho_path, "Initial density matrix JSON")->required();
  it->add_option("-n,--steps", steps, "Number of applications")->check(CLI::PositiveNumber);
  it->callback([] {
    const ChoiMatrix c = io::choi_from_json(io::read_file(choi_path));
    const DensityMatrix rho0 = io::density_from_json(io::read_file(rho_path));
    const auto seq = iterate(c, rho0, steps);
    if (csv()) {
      std::ostringstream os;
      os.precision(17);
      os << "step,step_distance";
      for (Index i = 0; i < rho0.dim() * rho0.dim(); ++i) os << ",re" << i << ",im" << i;
      os << "\n";
      const DensityMatrix* prev = &rho0;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const ComplexMatrix row = vec_row_major(seq[k].matrix()).transpose();
        os << k + 1 << "," << trace_distance(*prev, seq[k]) << "," << io::to_csv(row);
        prev = &seq[k];
      }
      return emit_text(os.str());
    }
    Json states = Json::array(), dist = Json::array();
    const DensityMatrix* prev = &rho0;
    for (const auto& s : seq) {
      states.push_back(io::to_json(s.matrix()));
      dist.push_back(trace_distance(*prev, s));
      prev = &s;
    }
    emit(Json{{"states", states}, {"step_distances", dist}});
  });
}

// engineer -----------------------------------------------------------------

void emit_choi(const ChoiMatrix& c, Json report) {
  if (csv()) return emit_text(io::to_csv(c.matrix()));
  if (report.is_null()) return emit(io::to_json(c));
  report["choi"] = io::to_json(c);
  emit(report);
}

void add_engineer(CLI::App& app) {
  auto* eng = app.add_subcommand("engineer", "Build channels with prescribed fixed points");
  eng->require_subcommand(1);

  static std::vector<std::string> sigma_paths, projector_paths;
  static std::string b_path;
  static bool report = false;
  static double rank_tol = tol::kRank;
  static sdp::SdpOptions sdp_opts;

  auto* single = eng->add_subcommand("single", "Single fixed point in closed form");
  single->add_option("--sigma", sigma_paths, "Fixed state JSON")->required()->expected(1);
  single->add_option("--b", b_path, "Decay state JSON (default maximally mixed)");
  single->add_flag("--report", report, "Include the validity ledger");
  single->callback([] {
    const auto sigma = read_states(sigma_paths).front();
    const auto spec = engineer::SingleFixedPointSpec::from_states(sigma, read_b_or_default(b_path, sigma.dim()));
    const auto ledger = engineer::check_single_fixed_point(spec);
    if (report && !engineer::all_passed(ledger)) {
      emit(Json{{"ledger", io::to_json(ledger)}, {"built", false}});
    }
    const ChoiMatrix c = engineer::build_single_fixed_point(spec);
    emit_choi(c, report ? Json{{"ledger", io::to_json(ledger)},
                               {"built", true},
                               {"lambda_max", spec.lambda_max}}
                        : Json());
  });

  auto* sep = eng->add_subcommand("separable", "Several fixed points via discriminating projectors");
  sep->add_option("--sigma", sigma_paths, "Fixed state JSON (repeat)")->required();
  sep->add_option("--projector", projector_paths, "Projector JSON per state (default: computed)");
  sep->add_option("--b", b_path, "Decay state JSON (default maximally mixed)");
  sep->add_option("--rank-tol", rank_tol)->check(CLI::PositiveNumber);
  sep->add_flag("--report", report, "Include the validity ledger");
  sep->callback([] {
    const auto sigmas = read_states(sigma_paths);
    engineer::SeparableMultiSpec spec{sigmas, {}, read_b_or_default(b_path, sigmas.front().dim())};
    Json rep = Json::object();
    if (projector_paths.empty()) {
      const auto disc = engineer::find_discrimination_projectors(sigmas, rank_tol);
      rep["discrimination"] = io::to_json(disc);
      spec.projectors = disc.projectors;
    } else {
      for (const auto& p : projector_paths) spec.projectors.push_back(io::hermitian_from_json(io::read_file(p)));
    }
    const auto ledger = engineer::check_separable_multi(spec, rank_tol);
    rep["ledger"] = io::to_json(ledger);
    rep["convergence_margin"] =
        engineer::all_passed(ledger) ? Json(spec.convergence_margin()) : Json(nullptr);
    if (report && !engineer::all_passed(ledger)) {
      rep["built"] = false;
      emit(rep);
    }
    const ChoiMatrix c = engineer::build_separable_multi(spec, rank_tol);
    rep["built"] = true;
    emit_choi(c, report ? rep : Json());
  });

  auto* viasdp = eng->add_subcommand("sdp", "Minimum-trace SDP construction with trace-preserving completion");
  viasdp->add_option("--sigma", sigma_paths, "Fixed state JSON (repeat)")->required();
  viasdp->add_option("--b", b_path, "Decay state JSON (default maximally mixed)");
  viasdp->add_option("--feas-tol", sdp_opts.feas_tol)->check(CLI::PositiveNumber);
  viasdp->add_option("--psd-tol", sdp_opts.psd_tol)->check(CLI::PositiveNumber);
  viasdp->add_option("--max-iter", sdp_opts.max_iter)->check(CLI::PositiveNumber);
  viasdp->add_flag("--report", report, "Include solver data, contraction and completion checks");
  viasdp->callback([] {
    const auto sigmas = read_states(sigma_paths);
    const auto ch = engineer::build_via_sdp(sigmas, read_b_or_default(b_path, sigmas.front().dim()), sdp_opts);
    if (ch.contraction_warning)
      std::cerr << "warning: contraction tr[X (1 (x) B^T)] = " << ch.contraction << " >= 1\n";
    Json rep;
    if (report) {
      rep = io::to_json(ch);
      rep.erase("choi");
      rep["literal_min_eig"] = ch.literal_min_eig;
      rep["completion_constrained"] = ch.completion_constrained;
      rep["cptp"] = io::to_json(is_cptp(ch.c));
    }
    emit_choi(ch.c, rep);
  });
}

// sdp ------------------------------------------------------------------------

void add_sdp(CLI::App& app) {
  auto* root = app.add_subcommand("sdp", "Semidefinite programs with equality constraints");
  root->require_subcommand(1);
  static std::string problem_path, dump_path;
  static std::vector<std::string> sigma_paths;
  static sdp::SdpOptions opts;

  auto* solve = root->add_subcommand("solve", "Solve max -tr[F0^T X] s.t. tr[A_k X] = b_k, X >= 0");
  auto* p = solve->add_option("--problem", problem_path, "Problem JSON");
  auto* s = solve->add_option("--sigma", sigma_paths, "Build the fixed-point SDP for these states instead");
  p->excludes(s);
  solve->add_option("--dump", dump_path, "Write problem and solution JSON here");
  solve->add_option("--feas-tol", opts.feas_tol)->check(CLI::PositiveNumber);
  solve->add_option("--psd-tol", opts.psd_tol)->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", opts.max_iter)->check(CLI::PositiveNumber);
  solve->callback([] {
    if (problem_path.empty() && sigma_paths.empty()) throw ValidationError("sdp solve needs --problem or --sigma");
    const sdp::SdpProblem prob = problem_path.empty()
                                     ? sdp::assemble_fixed_point_constraints(read_states(sigma_paths))
                                     : io::sdp_problem_from_json(io::read_file(problem_path));
    const sdp::SdpSolution sol = sdp::solve(prob, opts);
    if (!dump_path.empty()) {
      std::ofstream f(dump_path);
      if (!f) throw ValidationError("cannot write " + dump_path);
      f << Json{{"problem", io::to_json(prob)}, {"solution", io::to_json(sol)}}.dump(2) << "\n";
    }
    if (csv())
      emit_text(io::to_csv(sol.x.matrix()));
    else
      emit(io::to_json(sol));
    if (sol.status == sdp::SdpStatus::kInfeasible) throw InfeasibleError("sdp-infeasible", sol.message);
    if (sol.status == sdp::SdpStatus::kNumericalLimit) throw NumericalLimitError(sol.message);
  });
}

// quasireal ----------------------------------------------------------------

void add_quasireal(CLI::App& app) {
  auto* root = app.add_subcommand("quasireal", "Quasi-realizations and polyhedral cones");
  root->require_subcommand(1);
  static std::string q_path, cone_path, word;
  static int length = -1;
  static double tol_pos = 1e-9, tol_cone = 1e-8;

  auto* prob = root->add_subcommand("prob", "Word probabilities");
  prob->add_option("--q", q_path, "Quasi-realization JSON")->required();
  auto* w = prob->add_option("--word", word, "Comma-separated symbols (empty string for the empty word)");
  auto* l = prob->add_option("--length", length, "Enumerate all words of this length")->check(CLI::NonNegativeNumber);
  w->excludes(l);
  prob->callback([] {
    const auto q = io::quasi_from_json(io::read_file(q_path));
    if (length >= 0) {
      const auto dist = quasireal::word_distribution(q, length);
      if (csv()) {
        std::ostringstream os;
        os.precision(17);
        os << "word,probability\n";
        for (std::size_t i = 0; i < dist.words.size(); ++i) {
          for (std::size_t k = 0; k < dist.words[i].size(); ++k) os << (k ? " " : "") << dist.words[i][k];
          os << "," << dist.probabilities[i] << "\n";
        }
        return emit_text(os.str());
      }
      Json words = Json::array();
      for (std::size_t i = 0; i < dist.words.size(); ++i)
        words.push_back(Json{{"word", dist.words[i]}, {"probability", dist.probabilities[i]}});
      return emit(Json{{"length", length}, {"total", dist.total()}, {"words", words}});
    }
    no_csv("quasireal prob --word");
    quasireal::Word symbols;
    std::stringstream ss(word);
    std::string item;
    while (std::getline(ss, item, ',')) symbols.push_back(item);
    emit(Json{{"word", symbols}, {"probability", quasireal::word_probability(q, symbols)}});
  });

  auto* check = root->add_subcommand("check", "Positive-realization checks");
  check->add_option("--q", q_path, "Quasi-realization JSON")->required();
  check->add_option("--tol", tol_pos)->check(CLI::PositiveNumber);
  check->callback([] {
    no_csv("quasireal check");
    const auto q = io::quasi_from_json(io::read_file(q_path));
    Json j = io::to_json(quasireal::is_positive_realization(q, tol_pos));
    j["cause_matrix"] = Json::array();
    const RealMatrix c = quasireal::cause_matrix(q);
    for (Index i = 0; i < c.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(c.cols()));
      for (Index k = 0; k < c.cols(); ++k) row[static_cast<std::size_t>(k)] = c(i, k);
      j["cause_matrix"].push_back(row);
    }
    emit(j);
  });

  auto* cone = root->add_subcommand("cone-check", "Cone conditions for a given polyhedral cone");
  cone->add_option("--q", q_path, "Quasi-realization JSON")->required();
  cone->add_option("--cone", cone_path, "Cone JSON (default: non-negative orthant)");
  cone->add_option("--tol", tol_cone)->check(CLI::PositiveNumber);
  cone->callback([] {
    no_csv("quasireal cone-check");
    const auto q = io::quasi_from_json(io::read_file(q_path));
    const auto c = cone_path.empty() ? quasireal::PolyhedralCone::orthant(q.dim) : io::cone_from_json(io::read_file(cone_path));
    emit(io::to_json(quasireal::check_dharmadhikari(q, c, tol_cone)));
  });
}

// conesim ------------------------------------------------------------------

void add_conesim(CLI::App& app) {
  auto* root = app.add_subcommand("conesim", "Settle-classify-kick simulation");
  root->require_subcommand(1);
  static std::string config_path, traj_out, traj_in;
  static int rounds = 0;
  static bool quasi = false;

  auto* run = root->add_subcommand("run", "Simulate and write one JSON record per round");
  run->add_option("--config", config_path, "Simulation config JSON")->required();
  run->add_option("--out", traj_out, "Trajectory JSONL output")->required();
  run->add_option("--rounds", rounds, "Override n_rounds")->check(CLI::PositiveNumber);
  run->callback([] {
    no_csv("conesim run");
    DensityMatrix rho0 = DensityMatrix::maximally_mixed(1);
    conesim::SimulationConfig cfg = io::sim_config_from_json(io::read_file(config_path), rho0);
    if (g.seed_set) cfg.seed = g.seed;
    if (rounds > 0) cfg.n_rounds = rounds;
    const conesim::Trajectory t = conesim::run(cfg, rho0);
    std::ofstream f(traj_out);
    if (!f) throw ValidationError("cannot write " + traj_out);
    for (const auto& r : t.rounds) f << io::to_json(r).dump() << "\n";
    Json fps = Json::array();
    for (const auto& s : t.fixed_points) fps.push_back(io::to_json(s.matrix()));
    emit(Json{{"rounds", t.rounds.size()}, {"unclassified", t.unclassified()}, {"seed", cfg.seed},
              {"fixed_points", fps}});
  });

  auto* est = root->add_subcommand("estimate", "Estimate the classical process from a trajectory");
  est->add_option("trajectory", traj_in, "Trajectory JSONL")->required();
  est->add_flag("--quasi", quasi, "Also emit the positive realization built from the estimate");
  est->callback([] {
    std::ifstream f(traj_in);
    if (!f) throw ValidationError("cannot open " + traj_in);
    std::vector<std::optional<std::size_t>> symbols;
    std::string line;
    while (std::getline(f, line))
      if (!line.empty()) symbols.push_back(io::symbol_from_record(io::parse(line, traj_in)));
    const auto e = conesim::estimate_process(symbols);
    if (csv()) {
      ComplexMatrix t = e.transition.cast<Complex>();
      return emit_text(io::to_csv(t));
    }
    Json j = io::to_json(e);
    if (quasi) j["quasi_realization"] = io::to_json(conesim::to_quasi_realization(e));
    emit(j);
  });
}

// demo ---------------------------------------------------------------------

void add_demo(CLI::App& app) {
  auto* root = app.add_subcommand("demo", "Worked examples");
  root->require_subcommand(1);
  static std::string coeffs, s, r, b_path;

  auto* bell = root->add_subcommand("bell", "Bell-basis mixtures: discrimination ledger, channel and fixed points");
  bell->add_option("--coeffs", coeffs, "alpha0,beta0,delta0,eps0,alpha1,beta1,delta1,eps1");
  bell->add_option("--s", s, "Weights s0,s1,s2 of the first state");
  bell->add_option("--r", r, "Weights r0,r1,r2 of the second state");
  bell->add_option("--b", b_path, "Decay state JSON (default maximally mixed)");
  bell->callback([] {
    no_csv("demo bell");
    demo::BellInput in;
    if (!coeffs.empty()) {
      const auto c = split_numbers(coeffs, 8, "--coeffs");
      in.coeffs = {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]};
    }
    if (!s.empty()) {
      const auto v = split_numbers(s, 3, "--s");
      in.s = {v[0], v[1], v[2]};
    }
    if (!r.empty()) {
      const auto v = split_numbers(r, 3, "--r");
      in.r = {v[0], v[1], v[2]};
    }
    if (!b_path.empty()) in.b = io::density_from_json(io::read_file(b_path));
    const demo::BellReport rep = demo::run_bell_demo(in);
    Json j;
    j["sigma0"] = io::to_json(rep.sigma0.matrix());
    j["sigma1"] = io::to_json(rep.sigma1.matrix());
    j["discrimination"] = io::to_json(rep.discrimination);
    j["ledger"] = io::to_json(rep.ledger);
    j["path"] = rep.path;
    if (!rep.fallback_reason.empty()) j["fallback_reason"] = rep.fallback_reason;
    if (rep.sdp) {
      Json sd = io::to_json(*rep.sdp);
      sd.erase("choi");
      sd["literal_min_eig"] = rep.sdp->literal_min_eig;
      sd["completion_constrained"] = rep.sdp->completion_constrained;
      j["sdp"] = sd;
    }
    j["choi"] = io::to_json(*rep.channel);
    j["cptp"] = io::to_json(rep.cptp);
    j["fixed_point_residuals"] = rep.fixed_point_residuals;
    emit(j);
  });
}

void report_error(const char* kind, const std::string& reason, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"reason", reason}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfix: quantum channels with prescribed fixed points"};
  app.require_subcommand(1);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", g.out, "Write the result here instead of stdout");
  app.add_option("--seed", g.seed, "Random seed override")->each([](const std::string&) { g.seed_set = true; });
  app.fallthrough();
  add_channel(app);
  add_engineer(app);
  add_sdp(app);
  add_quasireal(app);
  add_conesim(app);
  add_demo(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  } catch (const InfeasibleError& e) {
    report_error("infeasible", e.reason(), e.what());
    return kInfeasible;
  } catch (const NumericalLimitError& e) {
    report_error("numerical-limit", "numerical-limit", e.what());
    return kNumericalLimit;
  } catch (const ValidationError& e) {
    report_error("validation", "validation", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    report_error("internal", "internal", e.what());
    return kGeneric;
  }
  return kOk;
}
