#include "relaxgap/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaxgap/rng.hpp"

namespace relaxgap {

namespace {

double penalty_of(const Problem& p, const Trajectory& tr, double rho) {
  double s = 0;
  for (const auto& x : tr.states) {
    double v = p.omega.violation(x);
    s += v * v;
  }
  double d = p.target.violation(tr.final_state());
  s += d * d;
  return rho * s;
}

struct Objective {
  const Problem* p;
  double dt;
  double rho;

  // returns (cost, penalty); +inf on blow-up
  std::pair<double, double> operator()(const ClassicalControl& c) const {
    try {
      Trajectory tr = integrate_classical(*p, c, dt);
      return {total_cost(*p, tr), penalty_of(*p, tr, rho)};
    } catch (const BlowUpError&) {
      return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    } catch (const EvalError&) {
      return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
  }
};

// Greedy coordinate pattern search; step halves when a full sweep brings no
// improvement, until the largest absolute step drops below 1e-6.
void pattern_search(const Problem& p, ClassicalControl& c, const Objective& obj,
                    double initial_frac, double& best_val) {
  const int m = p.m;
  const std::size_t K = c.values.size();
  std::vector<double> halfwidth(static_cast<std::size_t>(m));
  double max_halfwidth = 0;
  for (int i = 0; i < m; ++i) {
    halfwidth[static_cast<std::size_t>(i)] = 0.5 * (p.controls.upper[i] - p.controls.lower[i]);
    max_halfwidth = std::max(max_halfwidth, halfwidth[static_cast<std::size_t>(i)]);
  }
  if (max_halfwidth == 0) {  // singleton control set
    auto [cost, pen] = obj(c);
    best_val = cost + pen;
    return;
  }
  {
    auto [cost, pen] = obj(c);
    best_val = cost + pen;
  }
  double frac = initial_frac;
  int sweeps_at_frac = 0;
  while (frac * max_halfwidth >= 1e-6) {
    bool improved = false;
    for (std::size_t k = 0; k < K; ++k) {
      for (int i = 0; i < m; ++i) {
        double step = frac * halfwidth[static_cast<std::size_t>(i)];
        if (step == 0) continue;
        double orig = c.values[k][i];
        for (double cand : {orig + step, orig - step}) {
          double clipped = std::clamp(cand, p.controls.lower[i], p.controls.upper[i]);
          if (clipped == orig) continue;
          c.values[k][i] = clipped;
          auto [cost, pen] = obj(c);
          if (cost + pen < best_val - 1e-10 * (1 + std::abs(best_val))) {
            best_val = cost + pen;
            orig = clipped;
            improved = true;
          } else {
            c.values[k][i] = orig;
          }
        }
        // zero-sum exchange: bump this interval, spread the opposite change
        // over the rest; redistributes effort along active endpoint
        // constraints where single-coordinate moves jam
        if (K >= 2) {
          std::vector<double> column(K);
          for (std::size_t j = 0; j < K; ++j) column[j] = c.values[j][i];
          for (double sign : {1.0, -1.0}) {
            double delta =
                std::clamp(column[k] + sign * step, p.controls.lower[i], p.controls.upper[i]) -
                column[k];
            if (delta == 0) continue;
            c.values[k][i] = column[k] + delta;
            double comp = -delta / static_cast<double>(K - 1);
            for (std::size_t j = 0; j < K; ++j)
              if (j != k)
                c.values[j][i] =
                    std::clamp(column[j] + comp, p.controls.lower[i], p.controls.upper[i]);
            auto [cost, pen] = obj(c);
            if (cost + pen < best_val - 1e-10 * (1 + std::abs(best_val))) {
              best_val = cost + pen;
              for (std::size_t j = 0; j < K; ++j) column[j] = c.values[j][i];
              improved = true;
            } else {
              for (std::size_t j = 0; j < K; ++j) c.values[j][i] = column[j];
            }
          }
        }
      }
    }
    // the sweep cap stops micro-improvement creep under large penalty weights
    if (!improved || ++sweeps_at_frac > 40) {
      frac *= 0.5;
      sweeps_at_frac = 0;
    }
  }
}

ClassicalControl uniform_grid_control(const Problem& p, int K) {
  ClassicalControl c;
  c.time_grid.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k)
    c.time_grid[static_cast<std::size_t>(k)] = p.T * static_cast<double>(k) / K;
  c.values.assign(static_cast<std::size_t>(K), Eigen::VectorXd::Zero(p.m));
  return c;
}

}  // namespace

std::pair<double, double> evaluate_control(const Problem& p, const ClassicalControl& c,
                                           Membership /*mode*/) {
  Trajectory tr = integrate_classical(p, c, default_dt(p));
  return {total_cost(p, tr), penalty_of(p, tr, kPenaltyRho)};
}

DirectSolveResult solve_classical(const Problem& p, int K, int starts, std::uint64_t seed,
                                  Membership mode,
                                  const std::optional<ClassicalControl>& warm_start) {
  if (K < 1) throw ProblemError("K >= 1", "need at least one control interval");
  if (starts < 1) throw ProblemError("starts >= 1", "need at least one start");

  // coarse step for the search loop, fine step for the reported numbers
  double interval = p.T / K;
  double search_dt = std::min(interval / 2, p.T / 200);
  Objective search_obj{&p, search_dt, kPenaltyRho};

  ClassicalControl best;
  double best_val = std::numeric_limits<double>::infinity();
  double best_cost = 0, best_pen = 0;
  int best_start = -1;

  for (int s = 0; s < starts; ++s) {
    ClassicalControl c = uniform_grid_control(p, K);
    if (s == 0 && warm_start) {
      for (std::size_t k = 0; k < c.values.size(); ++k) {
        double mid = 0.5 * (c.time_grid[k] + c.time_grid[k + 1]);
        c.values[k] = warm_start->value_at(mid);
      }
    } else {
      Rng rng(seed, static_cast<std::uint64_t>(s));
      for (auto& v : c.values)
        for (int i = 0; i < p.m; ++i) v[i] = rng.uniform(p.controls.lower[i], p.controls.upper[i]);
    }
    double val;
    pattern_search(p, c, search_obj, 0.5, val);

    // feasibility polish: escalate the penalty weight when the endpoint or
    // path still violates, restarting the search at a small step
    auto [c0, p0] = search_obj(c);
    if (p0 > 1e-12) {
      for (double rho : {1e6, 1e8}) {
        Objective hard{&p, search_dt, rho};
        double v2;
        pattern_search(p, c, hard, 0.01, v2);
      }
      auto [c1, p1] = search_obj(c);
      val = c1 + p1;
    }

    if (val < best_val - 1e-15 || best_start < 0) {
      best_val = val;
      best = c;
      best_start = s;
    }
  }

  auto [cost, pen] = evaluate_control(p, best, mode);
  best_cost = cost;
  best_pen = pen;

  DirectSolveResult r;
  r.best_control = std::move(best);
  r.best_cost = best_cost;
  r.penalty_at_best = best_pen;
  r.starts = starts;
  r.seed = seed;
  return r;
}

}  // namespace relaxgap
