#ifndef RELAXGAP_LP_HPP_
#define RELAXGAP_LP_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace relaxgap {

/// min c'x  s.t.  A x = b,  x >= 0, stored column-wise.
struct SparseLp {
  struct Column {
    std::vector<int> idx;
    std::vector<double> val;
    double cost = 0;
  };
  int rows = 0;
  std::vector<Column> cols;
  Eigen::VectorXd rhs;
  std::vector<std::string> row_names;  // optional, for diagnostics/export

  void add_entry(std::size_t col, int row, double v) {
    if (v == 0) return;
    cols[col].idx.push_back(row);
    cols[col].val.push_back(v);
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0;
  Eigen::VectorXd x;          // structural variables
  long iterations = 0;
  int infeasible_row = -1;    // a row implicated by phase-1 failure, if any
};

/// Two-phase revised simplex with a dense basis inverse.  Suited to the
/// LPs assembled here: a handful of equality rows against many columns.
LpSolution solve_lp(const SparseLp& lp, double tol = 1e-9, long max_iterations = 2000000);

/// Sparse triplet dump: `rows`, `cols`, `entries` (row col value), `rhs`,
/// `objective` sections.
void write_triplets(const SparseLp& lp, std::ostream& os);

}  // namespace relaxgap

#endif  // RELAXGAP_LP_HPP_
