#include "relaxgap/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace relaxgap {

namespace {

struct Simplex {
  const SparseLp& lp;
  int m;
  int nstruct;
  double tol;
  long max_iters;

  // row-scaled copies
  std::vector<double> row_scale;
  Eigen::VectorXd b;  // scaled, sign-flipped so b >= 0

  // basis state: indices; j < nstruct structural, else artificial j-nstruct
  std::vector<int> basis;
  std::vector<char> in_basis;  // structural only
  Eigen::MatrixXd binv;
  Eigen::VectorXd xb;
  long iters = 0;

  explicit Simplex(const SparseLp& l, double t, long mi)
      : lp(l), m(l.rows), nstruct(static_cast<int>(l.cols.size())), tol(t), max_iters(mi) {
    row_scale.assign(static_cast<std::size_t>(m), 0.0);
    for (const auto& c : lp.cols)
      for (std::size_t k = 0; k < c.idx.size(); ++k)
        row_scale[static_cast<std::size_t>(c.idx[k])] =
            std::max(row_scale[static_cast<std::size_t>(c.idx[k])], std::abs(c.val[k]));
    for (int i = 0; i < m; ++i) {
      row_scale[static_cast<std::size_t>(i)] =
          std::max(row_scale[static_cast<std::size_t>(i)], std::abs(lp.rhs[i]));
      if (row_scale[static_cast<std::size_t>(i)] == 0) row_scale[static_cast<std::size_t>(i)] = 1;
    }
    b = Eigen::VectorXd(m);
    for (int i = 0; i < m; ++i) b[i] = lp.rhs[i] / row_scale[static_cast<std::size_t>(i)];
  }

  // scaled column j into dense vector (artificials are +/- unit columns)
  void column(int j, Eigen::VectorXd& out) const {
    out.setZero();
    if (j < nstruct) {
      const auto& c = lp.cols[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < c.idx.size(); ++k) {
        int r = c.idx[k];
        out[r] = c.val[k] / row_scale[static_cast<std::size_t>(r)] * sign_[static_cast<std::size_t>(r)];
      }
    } else {
      out[j - nstruct] = 1.0;
    }
  }

  std::vector<double> sign_;  // +1/-1 applied so that rhs >= 0

  void init_artificial_basis() {
    sign_.assign(static_cast<std::size_t>(m), 1.0);
    for (int i = 0; i < m; ++i)
      if (b[i] < 0) {
        sign_[static_cast<std::size_t>(i)] = -1.0;
        b[i] = -b[i];
      }
    basis.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = nstruct + i;
    in_basis.assign(static_cast<std::size_t>(nstruct), 0);
    binv = Eigen::MatrixXd::Identity(m, m);
    xb = b;
  }

  void refactorize() {
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd col(m);
    for (int i = 0; i < m; ++i) {
      column(basis[static_cast<std::size_t>(i)], col);
      B.col(i) = col;
    }
    binv = B.partialPivLu().inverse();
    xb = binv * b;
    for (int i = 0; i < m; ++i)
      if (xb[i] < 0 && xb[i] > -1e-7) xb[i] = 0;
  }

  double reduced_cost(int j, const Eigen::VectorXd& y, const std::vector<double>& cost) const {
    double cj = cost[static_cast<std::size_t>(j)];
    const auto& c = lp.cols[static_cast<std::size_t>(j)];
    double dot = 0;
    for (std::size_t k = 0; k < c.idx.size(); ++k) {
      int r = c.idx[k];
      dot += y[r] * (c.val[k] / row_scale[static_cast<std::size_t>(r)] *
                     sign_[static_cast<std::size_t>(r)]);
    }
    return cj - dot;
  }

  // One simplex phase over the given objective (length nstruct + m, artificial
  // costs included).  Returns Optimal / Unbounded / IterationLimit.
  LpStatus run_phase(const std::vector<double>& cost, bool allow_artificial_entry) {
    int stall = 0;
    double last_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd y(m), w(m), col(m);
    for (; iters < max_iters; ++iters) {
      if (iters % 64 == 63) refactorize();
      // duals: y' = c_B' B^-1
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i)
        cb[i] = cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
      y = binv.transpose() * cb;

      bool bland = stall > 4 * m + 40;
      int enter = -1;
      double best = -tol * 10;
      for (int j = 0; j < nstruct; ++j) {
        if (in_basis[static_cast<std::size_t>(j)]) continue;
        double d = reduced_cost(j, y, cost);
        if (bland) {
          if (d < -tol * 10) { enter = j; break; }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter == -1 && allow_artificial_entry) {
        // artificials never re-enter; nothing to do
      }
      if (enter == -1) return LpStatus::Optimal;

      column(enter, col);
      w = binv * col;
      int leave = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (w[i] > 1e-10) {
          double ratio = xb[i] / w[i];
          if (ratio < min_ratio - 1e-12 ||
              (ratio < min_ratio + 1e-12 && leave != -1 &&
               basis[static_cast<std::size_t>(i)] > basis[static_cast<std::size_t>(leave)])) {
            // tie-break toward kicking out artificials (largest index)
            min_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == -1) return LpStatus::Unbounded;

      pivot(enter, leave, w);

      double obj = 0;
      for (int i = 0; i < m; ++i)
        obj += cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] * xb[i];
      if (obj < last_obj - 1e-13) {
        last_obj = obj;
        stall = 0;
      } else {
        ++stall;
      }
    }
    return LpStatus::IterationLimit;
  }

  void pivot(int enter, int leave, const Eigen::VectorXd& w) {
    int old = basis[static_cast<std::size_t>(leave)];
    if (old < nstruct) in_basis[static_cast<std::size_t>(old)] = 0;
    basis[static_cast<std::size_t>(leave)] = enter;
    if (enter < nstruct) in_basis[static_cast<std::size_t>(enter)] = 1;
    // eta update of B^-1 and xb
    double piv = w[leave];
    double theta = xb[leave] / piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      xb[i] -= theta * w[i];
      if (xb[i] < 0 && xb[i] > -1e-9) xb[i] = 0;
    }
    xb[leave] = theta;
    Eigen::RowVectorXd pivrow = binv.row(leave) / piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      binv.row(i) -= w[i] * pivrow;
    }
    binv.row(leave) = pivrow;
  }
};

}  // namespace

LpSolution solve_lp(const SparseLp& lp, double tol, long max_iterations) {
  LpSolution sol;
  const int m = lp.rows;
  const int n = static_cast<int>(lp.cols.size());
  if (m == 0 || n == 0) {
    sol.status = m == 0 ? LpStatus::Optimal : LpStatus::Infeasible;
    sol.x = Eigen::VectorXd::Zero(n);
    return sol;
  }

  Simplex sx(lp, tol, max_iterations);
  sx.init_artificial_basis();

  // Phase 1: minimize the sum of artificials.
  std::vector<double> cost1(static_cast<std::size_t>(n + m), 0.0);
  for (int i = 0; i < m; ++i) cost1[static_cast<std::size_t>(n + i)] = 1.0;
  LpStatus st = sx.run_phase(cost1, true);
  sol.iterations = sx.iters;
  if (st == LpStatus::IterationLimit) {
    sol.status = st;
    return sol;
  }
  double art_sum = 0;
  for (int i = 0; i < m; ++i)
    if (sx.basis[static_cast<std::size_t>(i)] >= n) art_sum += sx.xb[i];
  if (art_sum > 1e-7) {
    sol.status = LpStatus::Infeasible;
    for (int i = 0; i < m; ++i)
      if (sx.basis[static_cast<std::size_t>(i)] >= n && sx.xb[i] > 1e-7)
        sol.infeasible_row = sx.basis[static_cast<std::size_t>(i)] - n;
    return sol;
  }

  // Pivot lingering zero-level artificials out where possible.
  {
    Eigen::VectorXd col(m), w(m);
    for (int i = 0; i < m; ++i) {
      if (sx.basis[static_cast<std::size_t>(i)] < n) continue;
      for (int j = 0; j < n; ++j) {
        if (sx.in_basis[static_cast<std::size_t>(j)]) continue;
        sx.column(j, col);
        w = sx.binv * col;
        if (std::abs(w[i]) > 1e-7) {
          sx.pivot(j, i, w);
          break;
        }
      }
    }
  }

  // Phase 2 over the true objective; artificial cost 0, entry blocked.  Any
  // artificial still basic sits on a dependent row and stays at level 0.
  std::vector<double> cost2(static_cast<std::size_t>(n + m), 0.0);
  for (int j = 0; j < n; ++j) cost2[static_cast<std::size_t>(j)] = lp.cols[static_cast<std::size_t>(j)].cost;
  st = sx.run_phase(cost2, false);
  sol.iterations = sx.iters;
  sol.status = st;
  if (st != LpStatus::Optimal) return sol;

  sx.refactorize();
  sol.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    int j = sx.basis[static_cast<std::size_t>(i)];
    if (j < n) sol.x[j] = std::max(0.0, sx.xb[i]);
  }
  sol.objective = 0;
  for (int j = 0; j < n; ++j)
    sol.objective += lp.cols[static_cast<std::size_t>(j)].cost * sol.x[j];
  return sol;
}

void write_triplets(const SparseLp& lp, std::ostream& os) {
  os << "rows " << lp.rows << "\n";
  os << "cols " << lp.cols.size() << "\n";
  std::size_t nnz = 0;
  for (const auto& c : lp.cols) nnz += c.idx.size();
  os << "entries " << nnz << "\n";
  for (std::size_t j = 0; j < lp.cols.size(); ++j) {
    const auto& c = lp.cols[j];
    for (std::size_t k = 0; k < c.idx.size(); ++k)
      os << c.idx[k] << " " << j << " " << c.val[k] << "\n";
  }
  os << "rhs\n";
  for (int i = 0; i < lp.rows; ++i) os << lp.rhs[i] << "\n";
  os << "objective\n";
  for (const auto& c : lp.cols) os << c.cost << "\n";
}

}  // namespace relaxgap
