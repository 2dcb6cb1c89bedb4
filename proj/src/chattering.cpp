#include "relaxgap/chattering.hpp"

#include <algorithm>
#include <cmath>

namespace relaxgap {

ClassicalControl chatter(const Problem& p, const YoungMeasureControl& y, int N) {
  if (N < 1) throw ProblemError("N >= 1", "need at least one slice per interval");
  y.validate(p.controls, p.T);
  ClassicalControl c;
  c.time_grid.push_back(0.0);
  for (std::size_t k = 0; k + 1 < y.time_grid.size(); ++k) {
    double t0 = y.time_grid[k];
    double frame = (y.time_grid[k + 1] - t0) / N;
    const auto& w = y.weights[k];
    for (int j = 0; j < N; ++j) {
      double cursor = t0 + j * frame;
      for (std::size_t a = 0; a < y.atoms.size(); ++a) {
        if (w[a] <= 0) continue;  // zero-weight atoms get no slot
        cursor += w[a] * frame;
        c.values.push_back(y.atoms[a]);
        c.time_grid.push_back(cursor);
      }
    }
  }
  // weight rounding can leave the last breakpoint a hair off T
  c.time_grid.back() = p.T;
  return c;
}

ChatteringError chattering_error(const Problem& p, const YoungMeasureControl& y, int N,
                                 double dt) {
  ClassicalControl c = chatter(p, y, N);
  Trajectory young = integrate_young(p, y, dt);
  Trajectory chat = integrate_classical(p, c, dt);

  // compare on a shared uniform grid: the two trajectories step on different
  // node sets (slots vs measure intervals)
  const int samples = 1000;
  ChatteringError e;
  for (int s = 0; s <= samples; ++s) {
    double t = p.T * static_cast<double>(s) / samples;
    double d = (young.state_at(t) - chat.state_at(t)).norm();
    e.state_err = std::max(e.state_err, d);
  }
  e.cost_err = std::abs(young.final_running_cost() - chat.final_running_cost());
  return e;
}

}  // namespace relaxgap
