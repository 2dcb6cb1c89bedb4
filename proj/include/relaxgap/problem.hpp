#ifndef RELAXGAP_PROBLEM_HPP_
#define RELAXGAP_PROBLEM_HPP_

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxgap/expr.hpp"

namespace relaxgap {

/// Named validation failure ("T > 0", "x0 in omega", ...).
struct ProblemError : std::runtime_error {
  ProblemError(std::string check_, std::string msg)
      : std::runtime_error(std::move(msg)), check(std::move(check_)) {}
  std::string check;
};

enum class Membership { Open, Closed };

struct BoxSpec {
  Eigen::VectorXd lower, upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x, Membership mode) const;
  /// Euclidean distance from x to the box (0 inside).
  double distance(const Eigen::VectorXd& x) const;
  void validate(const std::string& what) const;
};

enum class RegionKind { Implicit, Box };

/// Region of the state space: either {h(x) > 0} (open) / {h(x) >= 0}
/// (closure) for an expression h in x1..xn, or a plain box.  Membership is
/// always conjoined with the mandatory bounding box.
struct RegionSpec {
  RegionKind kind = RegionKind::Box;
  Expr h;                       // implicit kind
  Eigen::VectorXd lower, upper; // box kind
  BoxSpec bounding_box;

  static RegionSpec make_box(Eigen::VectorXd lo, Eigen::VectorXd hi,
                             std::optional<BoxSpec> bbox = std::nullopt);
  static RegionSpec make_implicit(Expr h, BoxSpec bbox);

  int dim() const { return bounding_box.dim(); }
  bool contains(const Eigen::VectorXd& x, Membership mode) const;
  double h_value(const Eigen::VectorXd& x) const;  // implicit kind only
  /// Distance-to-exclusion surrogate used by penalties: for boxes the
  /// Euclidean distance to the box, for implicit regions max(0, -h(x)).
  double violation(const Eigen::VectorXd& x) const;
  void validate(const std::string& what, int n) const;

  const CompiledExpr& compiled_h() const;

 private:
  mutable CompiledExpr h_compiled_;
  mutable bool h_ready_ = false;
};

/// Piecewise-constant-in-time probability weights over a shared atom list.
struct YoungMeasureControl {
  std::vector<double> time_grid;          // 0 = t0 < ... < tK = T
  std::vector<Eigen::VectorXd> atoms;     // control points in U
  std::vector<std::vector<double>> weights;  // K rows, row-stochastic

  std::size_t intervals() const { return weights.size(); }
  void validate(const BoxSpec& controls, double T) const;
};

/// Piecewise-constant control: one value per interval of time_grid.
struct ClassicalControl {
  std::vector<double> time_grid;
  std::vector<Eigen::VectorXd> values;

  static ClassicalControl constant(const Eigen::VectorXd& u, double T);
  std::size_t intervals() const { return values.size(); }
  const Eigen::VectorXd& value_at(double t) const;
  void validate(const BoxSpec& controls, double T) const;
};

struct Problem {
  std::string name;
  int n = 0, m = 0;
  double T = 0;
  Eigen::VectorXd x0;
  std::vector<Expr> f;  // length n, variables t, x1..xn, u1..um
  Expr lagrangian;      // variables t, x1..xn, u1..um
  Expr terminal_cost;   // variables x1..xn
  RegionSpec omega, target;
  BoxSpec controls;

  // Variable layouts used throughout the solvers.
  std::vector<std::string> txu_names;  // t, x1..xn, u1..um
  std::vector<std::string> x_names;    // x1..xn

  // Compiled evaluators bound to txu_names (f, L) and x_names (g).
  std::vector<CompiledExpr> f_compiled;
  CompiledExpr lagrangian_compiled;
  CompiledExpr terminal_cost_compiled;

  /// True when neither f nor L mentions t.
  bool autonomous() const;

  /// Rebuilds name layouts + compiled evaluators and checks all invariants.
  /// Throws ProblemError naming the failing check.
  void finalize();
};

std::vector<std::string> state_var_names(int n);
std::vector<std::string> txu_var_names(int n, int m);

/// Loads and validates a problem file (JSON schema documented in README).
Problem load_problem(const std::string& path);
Problem parse_problem_text(const std::string& json_text);

YoungMeasureControl load_young_measure(const std::string& path, const Problem& p);
ClassicalControl load_classical_control(const std::string& path, const Problem& p);

bool region_contains(const RegionSpec& r, const Eigen::VectorXd& x, Membership mode);

}  // namespace relaxgap

#endif  // RELAXGAP_PROBLEM_HPP_
