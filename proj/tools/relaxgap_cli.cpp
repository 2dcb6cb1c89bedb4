#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaxgap/chattering.hpp"
#include "relaxgap/classical.hpp"
#include "relaxgap/conditions.hpp"
#include "relaxgap/corpus.hpp"
#include "relaxgap/gap.hpp"
#include "relaxgap/occmeas.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace relaxgap;

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const ClassicalControl& c) {
  json j;
  j["time_grid"] = c.time_grid;
  json vals = json::array();
  for (const auto& v : c.values) vals.push_back(to_json(v));
  j["values"] = vals;
  return j;
}

json to_json(const ConditionReport& r) {
  json j;
  j["condition"] = to_string(r.condition);
  j["verdict"] = to_string(r.verdict);
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json wj;
    wj["description"] = w.description;
    wj["point"] = w.point;
    wj["value"] = w.value;
    ws.push_back(wj);
  }
  j["witnesses"] = ws;
  j["constants"] = json::object();
  for (const auto& [k, v] : r.constants) j["constants"][k] = v;
  j["samples_used"] = r.samples_used;
  j["seed"] = r.seed;
  j["notes"] = r.notes;
  return j;
}

json grid_json(const GridSpec& g) {
  return json{{"nt", g.nt}, {"nx", g.nx}, {"nu", g.nu}, {"degree", g.test_degree}};
}

std::string mode_name(Membership m) { return m == Membership::Open ? "open" : "closed"; }

Membership parse_mode(const std::string& s) {
  if (s == "open") return Membership::Open;
  if (s == "closed") return Membership::Closed;
  throw ProblemError("mode", "--mode must be open or closed");
}

/// Prints the report and mirrors it to --out when given; byte-identical runs
/// require that nothing time- or host-dependent lands in the JSON.
void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ProblemError("out", "cannot write " + out_path);
    out << text;
  }
}

std::vector<double> parse_ladder(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    v.push_back(std::stod(tok));
  }
  if (v.empty()) throw ProblemError("ladder", "--ladder needs at least one epsilon");
  return v;
}

int run(int argc, char** argv) {
  CLI::App app{"occupation-measure relaxations and relaxation-gap estimates "
               "for constrained optimal control"};
  app.require_subcommand(1);

  std::string problem_path, out_path, csv_path, mode_str = "closed";
  GridSpec grid;
  std::uint64_t seed = 0;

  auto add_grid_flags = [&](CLI::App* sub) {
    sub->add_option("--nt", grid.nt, "time cells");
    sub->add_option("--nx", grid.nx, "state cells per dimension");
    sub->add_option("--nu", grid.nu, "control cells per dimension");
    sub->add_option("--degree", grid.test_degree, "max total degree of test monomials");
  };

  // solve-relaxed
  auto* relaxed = app.add_subcommand("solve-relaxed", "grid LP over occupation measures");
  relaxed->add_option("problem", problem_path, "problem JSON file")->required();
  add_grid_flags(relaxed);
  double shrink_eps = 0;
  relaxed->add_option("--eps", shrink_eps, "inner shrink of the implicit domain");
  relaxed->add_option("--mode", mode_str, "open or closed domain membership");
  relaxed->add_option("--out", out_path, "also write the JSON report here");
  relaxed->add_option("--csv", csv_path, "write the discrete measure as CSV");

  // solve-classical
  auto* classical = app.add_subcommand("solve-classical", "multistart direct method");
  classical->add_option("problem", problem_path)->required();
  int K = 50, starts = 16;
  classical->add_option("--k", K, "control intervals");
  classical->add_option("--starts", starts, "multistart count");
  classical->add_option("--seed", seed, "rng seed");
  classical->add_option("--mode", mode_str, "open or closed domain membership");
  classical->add_option("--out", out_path);

  // chatter
  auto* chat = app.add_subcommand("chatter", "classical control from a Young measure");
  chat->add_option("problem", problem_path)->required();
  std::string young_path;
  int chatter_n = 10;
  double dt = 0;
  chat->add_option("--young", young_path, "Young-measure JSON file")->required();
  chat->add_option("--n", chatter_n, "frames per measure interval");
  chat->add_option("--dt", dt, "integration step (default T/1000)");
  chat->add_option("--out", out_path);

  // check
  auto* check = app.add_subcommand("check", "sample-based condition checkers");
  check->add_option("problem", problem_path)->required();
  std::string which = "fw1,fw2,h1,ipc,v4";
  check->add_option("--which", which, "comma list of fw1,fw2,h1,ipc,v4");
  check->add_option("--seed", seed, "rng seed");
  double eta = kDefaultIpcEta;
  long boundary_samples = kDefaultBoundarySamples;
  check->add_option("--eta", eta, "inward-pointing margin");
  check->add_option("--boundary-samples", boundary_samples);
  check->add_option("--out", out_path);

  // gap-bound
  auto* gap = app.add_subcommand("gap-bound", "upper bound on the relaxation gap");
  gap->add_option("problem", problem_path)->required();
  std::string ladder_str = "0.2,0.1,0.05,0.025";
  gap->add_option("--ladder", ladder_str, "comma list of shrink epsilons");
  gap->add_option("--k", K, "control intervals for the classical solves");
  gap->add_option("--starts", starts);
  gap->add_option("--seed", seed);
  add_grid_flags(gap);
  gap->add_option("--out", out_path);
  gap->add_option("--csv", csv_path, "epsilon, upper_shrunk, lower_full, gap_bound table");

  // residual
  auto* resid = app.add_subcommand("residual", "Liouville residual of a pushforward measure");
  resid->add_option("problem", problem_path)->required();
  std::string control_path;
  resid->add_option("--control", control_path, "classical control JSON file");
  resid->add_option("--young", young_path, "Young-measure JSON file");
  resid->add_option("--dt", dt, "integration step (default T/1000)");
  add_grid_flags(resid);
  resid->add_option("--out", out_path);

  // export-lp
  auto* exp = app.add_subcommand("export-lp", "dump the assembled LP as sparse triplets");
  exp->add_option("problem", problem_path)->required();
  add_grid_flags(exp);
  exp->add_option("--eps", shrink_eps);
  exp->add_option("--mode", mode_str);
  exp->add_option("--out", out_path, "triplet file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  Problem p = load_problem(problem_path);
  Membership mode = parse_mode(mode_str);
  grid.validate();

  if (*relaxed) {
    DiscreteOccupationMeasure dm = solve_occupation(p, grid, mode, shrink_eps);
    json j;
    j["problem"] = p.name;
    j["grid"] = grid_json(grid);
    j["mode"] = mode_name(mode);
    j["eps"] = shrink_eps;
    j["objective"] = dm.objective;
    j["total_mass"] = dm.total_mass();
    j["boundary_mass"] = dm.boundary_mass();
    emit(j, out_path);
    if (!csv_path.empty()) {
      std::ofstream os(csv_path);
      if (!os) throw ProblemError("csv", "cannot write " + csv_path);
      dm.write_csv(os, p.n, p.m);
    }
  } else if (*classical) {
    DirectSolveResult r = solve_classical(p, K, starts, seed, mode);
    json j;
    j["problem"] = p.name;
    j["k"] = K;
    j["starts"] = r.starts;
    j["seed"] = r.seed;
    j["mode"] = mode_name(mode);
    j["best_cost"] = r.best_cost;
    j["penalty"] = r.penalty_at_best;
    j["control"] = to_json(r.best_control);
    emit(j, out_path);
  } else if (*chat) {
    YoungMeasureControl y = load_young_measure(young_path, p);
    if (dt <= 0) dt = default_dt(p);
    ClassicalControl c = chatter(p, y, chatter_n);
    ChatteringError e = chattering_error(p, y, chatter_n, dt);
    json j;
    j["problem"] = p.name;
    j["n"] = chatter_n;
    j["dt"] = dt;
    j["state_err"] = e.state_err;
    j["cost_err"] = e.cost_err;
    j["control"] = to_json(c);
    emit(j, out_path);
  } else if (*check) {
    json reports = json::array();
    std::stringstream ss(which);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      ConditionReport r;
      if (tok == "fw1")
        r = check_fw1(p, 2000, seed);
      else if (tok == "fw2")
        r = check_fw2(p, 400, seed);
      else if (tok == "h1")
        r = check_h1(p, 40, seed);
      else if (tok == "ipc")
        r = check_ipc(p, boundary_samples, eta, seed);
      else if (tok == "v4")
        r = check_v4_convexity(p, 100, seed);
      else
        throw ProblemError("which", "unknown condition " + tok);
      reports.push_back(to_json(r));
    }
    emit(reports, out_path);
  } else if (*gap) {
    GapReport r = gap_bound(p, parse_ladder(ladder_str), grid, K, starts, seed);
    json j;
    j["problem"] = p.name;
    j["grid"] = grid_json(grid);
    j["mode"] = "closed";  // both sides of every rung use closed membership
    j["lower_full"] = r.lower_full;
    json rungs = json::array();
    for (const auto& rg : r.rungs) {
      json rj;
      rj["epsilon"] = rg.epsilon;
      rj["valid"] = rg.valid;
      if (!rg.flag.empty()) rj["flag"] = rg.flag;
      if (rg.valid || rg.flag.empty() || rg.upper_penalty > 0) {
        rj["upper_shrunk"] = rg.upper_shrunk;
        rj["upper_penalty"] = rg.upper_penalty;
        rj["gap_bound"] = rg.gap_bound;
      }
      rungs.push_back(rj);
    }
    j["rungs"] = rungs;
    j["caveats"] = r.caveats;
    emit(j, out_path);
    if (!csv_path.empty()) {
      std::ofstream os(csv_path);
      if (!os) throw ProblemError("csv", "cannot write " + csv_path);
      os << "epsilon,upper_shrunk,lower_full,gap_bound\n";
      for (const auto& rg : r.rungs) {
        if (!rg.valid) continue;
        os << rg.epsilon << "," << rg.upper_shrunk << "," << r.lower_full << ","
           << rg.gap_bound << "\n";
      }
    }
  } else if (*resid) {
    if (control_path.empty() == young_path.empty())
      throw ProblemError("input", "residual needs exactly one of --control / --young");
    if (dt <= 0) dt = default_dt(p);
    DiscreteOccupationMeasure dm;
    if (!control_path.empty()) {
      ClassicalControl c = load_classical_control(control_path, p);
      Trajectory tr = integrate_classical(p, c, dt);
      dm = trajectory_measure(p, tr, c, grid);
    } else {
      YoungMeasureControl y = load_young_measure(young_path, p);
      Trajectory tr = integrate_young(p, y, dt);
      dm = trajectory_measure(p, tr, y, grid);
    }
    json j;
    j["problem"] = p.name;
    j["grid"] = grid_json(grid);
    j["dt"] = dt;
    j["residual"] = liouville_residual(p, dm, grid.test_degree);
    emit(j, out_path);
  } else if (*exp) {
    AssembledLp a = assemble_occupation_lp(p, grid, mode, shrink_eps);
    std::ofstream os(out_path);
    if (!os) throw ProblemError("out", "cannot write " + out_path);
    write_triplets(a.lp, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Solvers are single-threaded; RELAXGAP_THREADS is accepted as an upper
  // cap for forward compatibility and ignored beyond validation.
  if (const char* env = std::getenv("RELAXGAP_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) {
      std::cerr << "RELAXGAP_THREADS must be a positive integer\n";
      return 2;
    }
  }
  try {
    return run(argc, argv);
  } catch (const relaxgap::ProblemError& e) {
    std::cerr << "input error [" << e.check << "]: " << e.what() << "\n";
    return 2;
  } catch (const relaxgap::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const relaxgap::OccError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const relaxgap::BlowUpError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
}
