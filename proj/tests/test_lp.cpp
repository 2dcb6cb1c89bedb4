#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "relaxgap/lp.hpp"
#include "relaxgap/rng.hpp"

using namespace relaxgap;

namespace {

SparseLp make_lp(int rows, const std::vector<std::vector<double>>& dense,
                 const std::vector<double>& cost, const std::vector<double>& rhs) {
  SparseLp lp;
  lp.rows = rows;
  lp.rhs = Eigen::VectorXd(rows);
  for (int r = 0; r < rows; ++r) lp.rhs[r] = rhs[static_cast<std::size_t>(r)];
  for (std::size_t j = 0; j < cost.size(); ++j) {
    lp.cols.push_back({});
    lp.cols.back().cost = cost[j];
    for (int r = 0; r < rows; ++r) lp.add_entry(j, r, dense[static_cast<std::size_t>(r)][j]);
  }
  return lp;
}

}  // namespace

TEST_CASE("one-row knapsack: all mass on the best column") {
  // min -x1 - 2 x2  s.t.  x1 + x2 = 1
  SparseLp lp = make_lp(1, {{1, 1}}, {-1, -2}, {1});
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  CHECK(s.x[0] == doctest::Approx(0.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("two equality rows pin the solution") {
  // x1 + x2 = 1, x1 - x2 = 0 -> (1/2, 1/2); min x1
  SparseLp lp = make_lp(2, {{1, 1}, {1, -1}}, {1, 0}, {1, 0});
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(s.objective == doctest::Approx(0.5));
}

TEST_CASE("negative right-hand side with nonnegative columns is infeasible") {
  SparseLp lp = make_lp(1, {{1, 2}}, {0, 0}, {-1});
  LpSolution s = solve_lp(lp);
  CHECK(s.status == LpStatus::Infeasible);
  CHECK(s.infeasible_row == 0);
}

TEST_CASE("conflicting equalities are infeasible") {
  // x1 = 1 and x1 = 2
  SparseLp lp = make_lp(2, {{1}, {1}}, {0}, {1, 2});
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("descent ray is reported unbounded") {
  // min -x1  s.t.  x1 - x2 = 0: push both to infinity
  SparseLp lp = make_lp(1, {{1, -1}}, {-1, 0}, {0});
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate ties do not cycle") {
  // multiple optimal bases, rhs 0 on one row
  SparseLp lp = make_lp(2, {{1, 1, 1, 0}, {1, -1, 0, 1}}, {1, 1, 2, 2}, {1, 0});
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("random LPs: returned point is feasible and beats sampled feasible points") {
  Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const int m = 3, ncols = 12;
    std::vector<std::vector<double>> dense(m, std::vector<double>(ncols));
    std::vector<double> cost(ncols);
    // build rhs from a known nonnegative point so the LP is feasible
    std::vector<double> x0(ncols);
    for (int j = 0; j < ncols; ++j) {
      cost[static_cast<std::size_t>(j)] = rng.uniform(-1, 1);
      x0[static_cast<std::size_t>(j)] = rng.uniform(0, 1);
      for (int r = 0; r < m; ++r)
        dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = rng.uniform(-2, 2);
    }
    std::vector<double> rhs(m, 0.0);
    double ref_obj = 0;
    for (int j = 0; j < ncols; ++j) {
      ref_obj += cost[static_cast<std::size_t>(j)] * x0[static_cast<std::size_t>(j)];
      for (int r = 0; r < m; ++r)
        rhs[static_cast<std::size_t>(r)] +=
            dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *
            x0[static_cast<std::size_t>(j)];
    }
    SparseLp lp = make_lp(m, dense, cost, rhs);
    LpSolution s = solve_lp(lp);
    if (s.status == LpStatus::Unbounded) continue;  // cost happened to have a ray
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective <= ref_obj + 1e-7);
    for (int r = 0; r < m; ++r) {
      double lhs = 0;
      for (int j = 0; j < ncols; ++j)
        lhs += dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * s.x[j];
      CHECK(lhs == doctest::Approx(rhs[static_cast<std::size_t>(r)]).epsilon(1e-6));
    }
    for (int j = 0; j < ncols; ++j) CHECK(s.x[j] >= -1e-9);
  }
}

TEST_CASE("triplet export has all sections") {
  SparseLp lp = make_lp(1, {{1, 1}}, {-1, -2}, {1});
  lp.row_names = {"mass"};
  std::ostringstream os;
  write_triplets(lp, os);
  std::string out = os.str();
  for (const char* section : {"rows", "cols", "entries", "rhs", "objective"})
    CHECK(out.find(section) != std::string::npos);
}
