// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and mirrored in README.md.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxgap/chattering.hpp"
#include "relaxgap/classical.hpp"
#include "relaxgap/conditions.hpp"
#include "relaxgap/corpus.hpp"
#include "relaxgap/gap.hpp"
#include "relaxgap/occmeas.hpp"

using namespace relaxgap;
using json = nlohmann::ordered_json;

namespace {

Problem corpus_problem(const std::string& file) {
  return load_problem(std::string(RELAXGAP_CORPUS_PATH) + "/" + file);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

YoungMeasureControl symmetric_two_atom() {
  YoungMeasureControl y;
  y.time_grid = {0.0, 1.0};
  y.atoms = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
  y.weights = {{0.5, 0.5}};
  return y;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  json report;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

// 1: triple agreement on example1 (relaxed ~ 0, classical <= 1e-3, measure ~ 0)
Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Problem p = corpus_problem("example1.json");

  double relaxed = solve_occupation(p, GridSpec{}, Membership::Closed, 0.0).objective;
  o.require(std::abs(relaxed) <= 0.05, "relaxed objective outside [-0.05, 0.05]");

  DirectSolveResult cls = solve_classical(p, 100, 16, 0, Membership::Closed);
  o.require(cls.best_cost <= 1e-3, "classical best cost above 1e-3");
  o.require(cls.penalty_at_best <= 1e-6, "classical solution infeasible");

  Trajectory tr = integrate_young(p, symmetric_two_atom(), default_dt(p));
  double measure_cost = total_cost(p, tr);
  o.require(measure_cost <= 1e-6, "two-atom measure cost above 1e-6");

  double elapsed = seconds_since(t0);
  o.require(elapsed <= 120.0, "runtime above 2 minutes");

  char buf[256];
  std::snprintf(buf, sizeof(buf), "relaxed %.4f, classical %.2e, measure %.2e (%.0fs)",
                relaxed, cls.best_cost, measure_cost, elapsed);
  o.detail = o.detail.empty() ? buf : o.detail + " | " + buf;
  o.report = {{"relaxed", relaxed},
              {"classical", cls.best_cost},
              {"measure_cost", measure_cost}};
  return o;
}

// 2: relaxed <= classical + 0.05 on all problems; + 0.02 after one refinement
Outcome criterion2() {
  Outcome o;
  o.report = json::array();
  for (const auto& name :
       {"example1", "convex_steer", "zero", "tangential_disk", "terminal_linear"}) {
    const auto& d = find_example(name);
    Problem p = corpus_problem(d.file);
    double relaxed = solve_occupation(p, d.reference_grid, Membership::Closed, 0.0).objective;
    DirectSolveResult cls = solve_classical(p, 20, 8, 0, Membership::Closed);
    o.require(relaxed <= cls.best_cost + 0.05,
              std::string(name) + ": ordering violated at reference grid");
    json row = {{"problem", name}, {"relaxed", relaxed}, {"classical", cls.best_cost}};
    if (std::string(name) == "convex_steer" || std::string(name) == "terminal_linear") {
      double refined =
          solve_occupation(p, d.reference_grid.refined(), Membership::Closed, 0.0).objective;
      o.require(refined <= cls.best_cost + 0.02,
                std::string(name) + ": refined gap above 0.02");
      row["relaxed_refined"] = refined;
    }
    o.report.push_back(row);
  }
  if (o.pass) o.detail = "ordering holds on all 5 problems";
  return o;
}

// 3: convex problem, both sides near 0.81, V4 satisfied
Outcome criterion3() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Problem p = corpus_problem("convex_steer.json");
  DirectSolveResult cls = solve_classical(p, 20, 16, 0, Membership::Closed);
  o.require(std::abs(cls.best_cost - 0.81) <= 0.01, "classical not within 0.81 +- 0.01");
  double relaxed = solve_occupation(p, GridSpec{}, Membership::Closed, 0.0).objective;
  o.require(std::abs(relaxed - 0.81) <= 0.05, "relaxed not within 0.81 +- 0.05");
  ConditionReport v4 = check_v4_convexity(p, 100, 0);
  o.require(v4.verdict == Verdict::SatisfiedOnSamples, "V4 not satisfied on samples");
  double elapsed = seconds_since(t0);
  o.require(elapsed <= 180.0, "runtime above 3 minutes");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "classical %.4f, relaxed %.4f (%.0fs)", cls.best_cost,
                relaxed, elapsed);
  o.detail = o.detail.empty() ? buf : o.detail + " | " + buf;
  o.report = {{"classical", cls.best_cost}, {"relaxed", relaxed}};
  return o;
}

// 4: chattering error decreasing, O(1/N) rate, err(10) <= 1/(2*10)
Outcome criterion4() {
  Outcome o;
  Problem p = corpus_problem("example1.json");
  YoungMeasureControl y = symmetric_two_atom();
  std::vector<int> ns = {5, 10, 20, 40, 80};
  std::vector<double> errs;
  for (int n : ns) errs.push_back(chattering_error(p, y, n, 1e-3).state_err);
  for (std::size_t i = 1; i < errs.size(); ++i)
    o.require(errs[i] < errs[i - 1], "state error not decreasing");
  // slope of log(err) against log(N) by least squares
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double lx = std::log(ns[i]), ly = std::log(errs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double k = static_cast<double>(ns.size());
  double rate = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
  o.require(rate >= 0.8 && rate <= 1.2, "fitted rate outside [0.8, 1.2]");
  o.require(errs[1] <= 0.05 + 1e-12, "state error at N=10 above 1/(2N)");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "rate %.2f, err(10) %.4f", rate, errs[1]);
  o.detail = o.detail.empty() ? buf : o.detail + " | " + buf;
  o.report = {{"errors", errs}, {"rate", rate}};
  return o;
}

// 5: checker pins (V4, IPC both ways, H1 autonomous short-circuit)
Outcome criterion5() {
  Outcome o;
  Problem e1 = corpus_problem("example1.json");
  ConditionReport v4 = check_v4_convexity(e1, 100, 0);
  o.require(v4.verdict == Verdict::Violated && !v4.witnesses.empty(),
            "V4 not violated with a witness on example1");

  ConditionReport ipc_box = check_ipc(e1, kDefaultBoundarySamples, 0.5, 0);
  o.require(ipc_box.verdict == Verdict::SatisfiedOnSamples,
            "IPC not satisfied on the example1 box");

  Problem disk = corpus_problem("tangential_disk.json");
  ConditionReport ipc_disk = check_ipc(disk, kDefaultBoundarySamples, kDefaultIpcEta, 0);
  o.require(ipc_disk.verdict == Verdict::Violated, "IPC not violated on tangential_disk");
  o.require(ipc_disk.constants.at("violation_count") ==
                static_cast<double>(ipc_disk.samples_used),
            "IPC violation not at every sampled boundary point");

  json h1 = json::array();
  for (const auto& name :
       {"example1", "convex_steer", "zero", "tangential_disk", "terminal_linear"}) {
    Problem p = corpus_problem(find_example(name).file);
    ConditionReport r = check_h1(p, 40, 0);
    o.require(r.verdict == Verdict::SatisfiedOnSamples &&
                  r.constants.at("K_hat") == 0.0,
              std::string(name) + ": H1 did not short-circuit with K=0");
    h1.push_back({{"problem", name}, {"K_hat", r.constants.at("K_hat")}});
  }
  if (o.pass) o.detail = "V4/IPC/H1 pins all hold";
  o.report = {{"v4_witnesses", v4.witnesses.size()},
              {"ipc_disk_violations", ipc_disk.constants.at("violation_count")},
              {"h1", h1}};
  return o;
}

// 6: Liouville residual along a 3-step joint (dt, grid) refinement
Outcome criterion6() {
  Outcome o;
  Problem p = corpus_problem("terminal_linear.json");
  auto c = ClassicalControl::constant(Eigen::VectorXd::Constant(1, -1.0), p.T);
  struct Rung {
    double dt;
    GridSpec grid;
  };
  std::vector<Rung> rungs = {{5e-3, {20, 40, 21, 3}}, {2.5e-3, {40, 80, 42, 3}},
                             {1.25e-3, {80, 160, 84, 3}}};
  std::vector<double> residuals;
  for (const auto& r : rungs) {
    Trajectory tr = integrate_classical(p, c, r.dt);
    residuals.push_back(
        liouville_residual(p, trajectory_measure(p, tr, c, r.grid), r.grid.test_degree));
  }
  for (std::size_t i = 1; i < residuals.size(); ++i)
    o.require(residuals[i] <= residuals[i - 1] * 1.1, "residual not decreasing (10% jitter)");
  o.require(residuals.back() <= 1e-2, "final residual above 1e-2");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "residuals %.3f -> %.3f -> %.4f", residuals[0],
                residuals[1], residuals[2]);
  o.detail = o.detail.empty() ? buf : o.detail + " | " + buf;
  o.report = {{"residuals", residuals}};
  return o;
}

// 7: gap-bound ladder on convex_steer
Outcome criterion7() {
  Outcome o;
  Problem p = corpus_problem("convex_steer.json");
  GapReport r = gap_bound(p, {0.2, 0.1, 0.05}, GridSpec{}, 20, 8, 0);
  const GapRung* smallest = nullptr;
  for (const auto& rung : r.rungs) {
    if (rung.valid) {
      o.require(rung.gap_bound >= -0.05, "a rung fell below the -0.05 tolerance floor");
      if (!smallest || rung.epsilon < smallest->epsilon) smallest = &rung;
    }
  }
  o.require(smallest != nullptr, "no valid rung");
  if (smallest) {
    o.require(std::abs(smallest->epsilon - 0.05) < 1e-12, "smallest valid rung is not 0.05");
    o.require(smallest->gap_bound <= 0.1, "gap bound at eps=0.05 above 0.1");
    char buf[160];
    std::snprintf(buf, sizeof(buf), "gap at eps=0.05: %.4f (lower %.4f)",
                  smallest->gap_bound, r.lower_full);
    o.detail = o.detail.empty() ? buf : o.detail + " | " + buf;
  }
  json rungs = json::array();
  for (const auto& rung : r.rungs)
    rungs.push_back({{"epsilon", rung.epsilon},
                     {"valid", rung.valid},
                     {"upper", rung.upper_shrunk},
                     {"gap", rung.gap_bound}});
  o.report = {{"lower_full", r.lower_full}, {"rungs", rungs}};
  return o;
}

}  // namespace

int main() {
  using Criterion = Outcome (*)();
  std::vector<std::pair<std::string, Criterion>> criteria = {
      {"example1 triple agreement", criterion1},
      {"relaxed <= classical ordering on the corpus", criterion2},
      {"convex no-gap reproduction", criterion3},
      {"chattering convergence", criterion4},
      {"condition-checker pins", criterion5},
      {"Liouville residual refinement", criterion6},
      {"gap-bound pipeline", criterion7},
  };

  bool all_pass = true;
  std::vector<std::string> first_dumps;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o = criteria[i].second();
    first_dumps.push_back(o.report.dump());
    all_pass &= o.pass;
    std::printf("criterion %zu: %s — %s — %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }

  // 8: rerunning 1-7 with the same seeds reproduces the reports byte for byte
  bool deterministic = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o = criteria[i].second();
    if (o.report.dump() != first_dumps[i]) deterministic = false;
  }
  all_pass &= deterministic;
  std::printf("criterion 8: %s — determinism — %s\n", deterministic ? "PASS" : "FAIL",
              deterministic ? "criteria 1-7 reports byte-identical on rerun"
                            : "rerun reports differ");
  return all_pass ? 0 : 1;
}
