#ifndef RELAXGAP_DYNAMICS_HPP_
#define RELAXGAP_DYNAMICS_HPP_

#include <functional>
#include <iosfwd>
#include <stdexcept>

#include "relaxgap/problem.hpp"

namespace relaxgap {

struct BlowUpError : std::runtime_error {
  BlowUpError(double t)
      : std::runtime_error("state became nonfinite at t = " + std::to_string(t)), time(t) {}
  double time;
};

/// Integration record: states on the step grid, the accumulated running cost
/// (the lifted coordinate), and per-node domain membership flags.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> running_cost;
  std::vector<bool> in_omega_open, in_omega_closed;

  const Eigen::VectorXd& final_state() const { return states.back(); }
  double final_running_cost() const { return running_cost.back(); }

  /// Linear interpolation between step nodes.
  Eigen::VectorXd state_at(double t) const;
  double running_cost_at(double t) const;

  void write_csv(std::ostream& os) const;
};

/// RK4 with a fixed step per control interval; steps never straddle a
/// control switch.  dt is a target: each interval uses ceil(len/dt) equal
/// steps.
Trajectory integrate_classical(const Problem& p, const ClassicalControl& c, double dt);

/// Integrates the atom-weighted average field and Lagrangian.
Trajectory integrate_young(const Problem& p, const YoungMeasureControl& y, double dt);

/// running cost at T plus terminal cost at the endpoint.
double total_cost(const Problem& p, const Trajectory& tr);

/// Evaluator of the lifted parametrization (f(t,x,u), L(t,x,u)); output has
/// n+1 components with L last.
using LiftedField =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
LiftedField lifted_field(const Problem& p);

inline double default_dt(const Problem& p) { return p.T / 1000.0; }

}  // namespace relaxgap

#endif  // RELAXGAP_DYNAMICS_HPP_
