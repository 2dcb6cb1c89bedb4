#include "relaxgap/gap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace relaxgap {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RegionSpec shrink_region(const RegionSpec& r, double eps, const std::vector<std::string>& x_names,
                         const std::string& what) {
  if (r.kind == RegionKind::Implicit) {
    // {h >= eps} restated as {h - eps >= 0}; bounding box unchanged.
    Expr h = parse_expression("(" + to_string(r.h) + ")-(" + fmt(eps) + ")", x_names);
    RegionSpec s = RegionSpec::make_implicit(std::move(h), r.bounding_box);
    // nonempty iff some probe grid center stays inside
    const int per_dim = r.dim() == 1 ? 401 : 41;
    long total = 1;
    for (int d = 0; d < r.dim(); ++d) total *= per_dim;
    bool hit = false;
    Eigen::VectorXd x(r.dim());
    for (long c = 0; c < total && !hit; ++c) {
      long rem = c;
      for (int d = 0; d < r.dim(); ++d) {
        int i = static_cast<int>(rem % per_dim);
        rem /= per_dim;
        double lo = r.bounding_box.lower[d], hi = r.bounding_box.upper[d];
        x[d] = lo + (hi - lo) * (i + 0.5) / per_dim;
      }
      hit = s.contains(x, Membership::Closed);
    }
    if (!hit)
      throw ProblemError("inner approximation nonempty",
                         "inner approximation of " + what + " empty at epsilon " + fmt(eps));
    return s;
  }
  Eigen::VectorXd lo = r.lower.array() + eps;
  Eigen::VectorXd hi = r.upper.array() - eps;
  if ((lo.array() > hi.array()).any())
    throw ProblemError("inner approximation nonempty",
                       "inner approximation of " + what + " empty at epsilon " + fmt(eps));
  return RegionSpec::make_box(std::move(lo), std::move(hi), r.bounding_box);
}

}  // namespace

InnerApproximation shrink(const Problem& p, double eps) {
  if (!(eps > 0)) throw ProblemError("epsilon > 0", "shrink amount must be positive");
  InnerApproximation ia;
  ia.epsilon = eps;
  ia.omega_eps = shrink_region(p.omega, eps, p.x_names, "omega");
  ia.target_eps = shrink_region(p.target, eps, p.x_names, "target");
  ia.x0_in_omega_eps = ia.omega_eps.contains(p.x0, Membership::Closed);
  return ia;
}

Problem shrunken_problem(const Problem& p, const InnerApproximation& ia) {
  Problem q = p;
  q.name = p.name + "/eps=" + fmt(ia.epsilon);
  q.omega = ia.omega_eps;
  q.target = ia.target_eps;
  q.finalize();  // throws "x0 in omega" when x0 left the shrunken domain
  return q;
}

GapReport gap_bound(const Problem& p, const std::vector<double>& ladder, const GridSpec& grid,
                    int K, int starts, std::uint64_t seed) {
  if (ladder.empty()) throw ProblemError("ladder nonempty", "need at least one epsilon");
  GapReport rep;
  rep.ladder = ladder;
  std::sort(rep.ladder.begin(), rep.ladder.end(), std::greater<double>());

  rep.lower_full = solve_occupation(p, grid, Membership::Closed, 0.0).objective;
  rep.caveats.push_back(
      "lower bound is a grid LP estimate, not a certified bound; refine the grid "
      "and test degree to tighten it");

  std::optional<ClassicalControl> warm;
  for (double eps : rep.ladder) {
    GapRung rung;
    rung.epsilon = eps;
    try {
      InnerApproximation ia = shrink(p, eps);
      Problem q = shrunken_problem(p, ia);
      DirectSolveResult r = solve_classical(q, K, starts, seed, Membership::Closed, warm);
      rung.upper_shrunk = r.best_cost;
      rung.upper_penalty = r.penalty_at_best;
      rung.gap_bound = r.best_cost - rep.lower_full;
      if (r.penalty_at_best > 1e-6) {
        rung.flag = "no feasible control found on the shrunken domain (penalty " +
                    fmt(r.penalty_at_best) + ")";
      } else {
        rung.valid = true;
        warm = r.best_control;  // next (smaller) epsilon relaxes the domain
      }
    } catch (const ProblemError& e) {
      rung.flag = e.what();
    }
    if (!rung.valid && !rung.flag.empty())
      rep.caveats.push_back("epsilon " + fmt(eps) + ": " + rung.flag);
    rep.rungs.push_back(std::move(rung));
  }
  return rep;
}

}  // namespace relaxgap
