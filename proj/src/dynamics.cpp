#include "relaxgap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace relaxgap {

namespace {

// Right-hand side of the lifted system (x, running cost) for one fixed
// control sample set.  For classical integration there is one (atom, weight
// 1); for Young integration the atoms of the active interval.
struct AveragedRhs {
  const Problem* p;
  const std::vector<Eigen::VectorXd>* atoms;
  const std::vector<double>* weights;  // same length as atoms

  void operator()(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx,
                  double& dcost, std::vector<double>& slots) const {
    const int n = p->n;
    slots[0] = t;
    for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(1 + i)] = x[i];
    dx.setZero();
    dcost = 0;
    for (std::size_t a = 0; a < atoms->size(); ++a) {
      double w = (*weights)[a];
      if (w == 0) continue;
      const Eigen::VectorXd& u = (*atoms)[a];
      for (int i = 0; i < p->m; ++i) slots[static_cast<std::size_t>(1 + n + i)] = u[i];
      for (int i = 0; i < n; ++i)
        dx[i] += w * p->f_compiled[static_cast<std::size_t>(i)].eval(slots);
      dcost += w * p->lagrangian_compiled.eval(slots);
    }
  }
};

void record_node(const Problem& p, double t, const Eigen::VectorXd& x, double cost,
                 Trajectory& tr) {
  tr.times.push_back(t);
  tr.states.push_back(x);
  tr.running_cost.push_back(cost);
  tr.in_omega_open.push_back(p.omega.contains(x, Membership::Open));
  tr.in_omega_closed.push_back(p.omega.contains(x, Membership::Closed));
}

// Classical one-step 4th-order scheme on [t, t+h].
void rk4_step(const AveragedRhs& rhs, double t, double h, Eigen::VectorXd& x, double& cost,
              std::vector<double>& slots) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), xt(n);
  double c1, c2, c3, c4;
  rhs(t, x, k1, c1, slots);
  xt = x + 0.5 * h * k1;
  rhs(t + 0.5 * h, xt, k2, c2, slots);
  xt = x + 0.5 * h * k2;
  rhs(t + 0.5 * h, xt, k3, c3, slots);
  xt = x + h * k3;
  rhs(t + h, xt, k4, c4, slots);
  x += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
  cost += (h / 6.0) * (c1 + 2 * c2 + 2 * c3 + c4);
}

Trajectory integrate_piecewise(const Problem& p, const std::vector<double>& grid,
                               const std::function<void(std::size_t, std::vector<Eigen::VectorXd>&,
                                                        std::vector<double>&)>& interval_atoms,
                               double dt) {
  Trajectory tr;
  Eigen::VectorXd x = p.x0;
  double cost = 0;
  std::vector<double> slots(static_cast<std::size_t>(1 + p.n + p.m));
  record_node(p, 0.0, x, cost, tr);

  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double t0 = grid[k], t1 = grid[k + 1];
    double len = t1 - t0;
    if (len <= 0) continue;
    interval_atoms(k, atoms, weights);
    AveragedRhs rhs{&p, &atoms, &weights};
    auto steps = static_cast<long>(std::ceil(len / dt - 1e-9));
    if (steps < 1) steps = 1;
    double h = len / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
      double t = t0 + h * static_cast<double>(s);
      rk4_step(rhs, t, h, x, cost, slots);
      if (!x.allFinite() || !std::isfinite(cost)) throw BlowUpError(t + h);
      record_node(p, s + 1 == steps ? t1 : t + h, x, cost, tr);
    }
  }
  return tr;
}

}  // namespace

Trajectory integrate_classical(const Problem& p, const ClassicalControl& c, double dt) {
  return integrate_piecewise(
      p, c.time_grid,
      [&](std::size_t k, std::vector<Eigen::VectorXd>& atoms, std::vector<double>& w) {
        atoms.assign(1, c.values[k]);
        w.assign(1, 1.0);
      },
      dt);
}

Trajectory integrate_young(const Problem& p, const YoungMeasureControl& y, double dt) {
  return integrate_piecewise(
      p, y.time_grid,
      [&](std::size_t k, std::vector<Eigen::VectorXd>& atoms, std::vector<double>& w) {
        atoms = y.atoms;
        w = y.weights[k];
      },
      dt);
}

double total_cost(const Problem& p, const Trajectory& tr) {
  const Eigen::VectorXd& xT = tr.final_state();
  double g = p.terminal_cost_compiled.eval(
      std::span<const double>(xT.data(), static_cast<std::size_t>(xT.size())));
  return tr.final_running_cost() + g;
}

LiftedField lifted_field(const Problem& p) {
  // copies of the compiled evaluators keep the closure self-contained
  auto f = p.f_compiled;
  auto L = p.lagrangian_compiled;
  int n = p.n, m = p.m;
  return [f, L, n, m](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    std::vector<double> slots(static_cast<std::size_t>(1 + n + m));
    slots[0] = t;
    for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(1 + i)] = x[i];
    for (int i = 0; i < m; ++i) slots[static_cast<std::size_t>(1 + n + i)] = u[i];
    Eigen::VectorXd out(n + 1);
    for (int i = 0; i < n; ++i) out[i] = f[static_cast<std::size_t>(i)].eval(slots);
    out[n] = L.eval(slots);
    return out;
  };
}

Eigen::VectorXd Trajectory::state_at(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return states.front();
  if (it == times.end()) return states.back();
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  double t1 = times[i], t0 = times[i - 1];
  if (t1 == t0) return states[i];
  double a = (t - t0) / (t1 - t0);
  return (1 - a) * states[i - 1] + a * states[i];
}

double Trajectory::running_cost_at(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return running_cost.front();
  if (it == times.end()) return running_cost.back();
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  double t1 = times[i], t0 = times[i - 1];
  if (t1 == t0) return running_cost[i];
  double a = (t - t0) / (t1 - t0);
  return (1 - a) * running_cost[i - 1] + a * running_cost[i];
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  for (int i = 1; i <= states.front().size(); ++i) os << ",x" << i;
  os << ",running_cost,in_omega_open,in_omega_closed\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << times[k];
    for (int i = 0; i < states[k].size(); ++i) os << "," << states[k][i];
    os << "," << running_cost[k] << "," << (in_omega_open[k] ? 1 : 0) << ","
       << (in_omega_closed[k] ? 1 : 0) << "\n";
  }
}

}  // namespace relaxgap
