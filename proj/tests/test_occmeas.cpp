#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relaxgap/corpus.hpp"
#include "relaxgap/occmeas.hpp"

using namespace relaxgap;

namespace {

Problem corpus_problem(const std::string& file) {
  return load_problem(std::string(RELAXGAP_CORPUS_PATH) + "/" + file);
}

}  // namespace

TEST_CASE("monomial counts") {
  CHECK(test_monomials(1, 4).size() == 15);  // bivariate (t,x), degree <= 4
  CHECK(test_monomials(2, 4).size() == 35);
  CHECK(test_monomials(1, 1).size() == 3);
}

TEST_CASE("assembled LP shape on the reference grid") {
  Problem p = corpus_problem("example1.json");
  AssembledLp a = assemble_occupation_lp(p, GridSpec{}, Membership::Closed, 0.0);
  CHECK(a.mu_count == 20 * 40 * 21);
  CHECK(a.bd_count == 40);
  CHECK(a.lp.rows == 16);  // 15 Liouville rows + boundary normalization
  CHECK(a.lp.row_names.back() == "boundary_mass");
}

TEST_CASE("constant and linear-in-t test functions give the mass identities") {
  Problem p = corpus_problem("example1.json");
  GridSpec g{6, 8, 5, 2};
  AssembledLp a = assemble_occupation_lp(p, g, Membership::Closed, 0.0);
  int const_row = -1, t_row = -1;
  for (std::size_t r = 0; r < a.monomials.size(); ++r) {
    const auto& mo = a.monomials[r];
    if (mo[0] == 0 && mo[1] == 0) const_row = static_cast<int>(r);
    if (mo[0] == 1 && mo[1] == 0) t_row = static_cast<int>(r);
  }
  REQUIRE(const_row >= 0);
  REQUIRE(t_row >= 0);
  // phi = 1: no mu entries, coefficient -1 on every terminal column, rhs -1
  CHECK(a.lp.rhs[const_row] == doctest::Approx(-1.0));
  for (int j = 0; j < a.mu_count; ++j)
    for (std::size_t e = 0; e < a.lp.cols[static_cast<std::size_t>(j)].idx.size(); ++e)
      CHECK(a.lp.cols[static_cast<std::size_t>(j)].idx[e] != const_row);
  // phi = t: coefficient 1 on every mu column, -T on terminal columns
  for (int j = 0; j < a.mu_count + a.bd_count; ++j) {
    const auto& col = a.lp.cols[static_cast<std::size_t>(j)];
    double c = 0;
    for (std::size_t e = 0; e < col.idx.size(); ++e)
      if (col.idx[e] == t_row) c = col.val[e];
    CHECK(c == doctest::Approx(j < a.mu_count ? 1.0 : -p.T));
  }
}

TEST_CASE("solved measure has mass T and a terminal probability") {
  Problem p = corpus_problem("example1.json");
  DiscreteOccupationMeasure dm = solve_occupation(p, GridSpec{}, Membership::Closed, 0.0);
  CHECK(std::abs(dm.objective) <= 0.05);
  CHECK(dm.total_mass() == doctest::Approx(p.T).epsilon(1e-6));
  CHECK(dm.boundary_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("objective grows with test degree") {
  Problem p = corpus_problem("example1.json");
  GridSpec coarse{10, 20, 11, 2};
  GridSpec fine = coarse;
  fine.test_degree = 4;
  double lo = solve_occupation(p, coarse, Membership::Closed, 0.0).objective;
  double hi = solve_occupation(p, fine, Membership::Closed, 0.0).objective;
  CHECK(lo <= hi + 1e-9);
}

TEST_CASE("objective grows with inner shrinking of an implicit domain") {
  Problem p = corpus_problem("tangential_disk.json");
  GridSpec g = find_example("tangential_disk").reference_grid;
  double full = solve_occupation(p, g, Membership::Closed, 0.0).objective;
  double shrunk = solve_occupation(p, g, Membership::Closed, 0.1).objective;
  CHECK(full <= shrunk + 1e-9);
}

TEST_CASE("shrinking a box domain is rejected") {
  Problem p = corpus_problem("example1.json");
  CHECK_THROWS_AS(assemble_occupation_lp(p, GridSpec{}, Membership::Closed, 0.1), OccError);
}

TEST_CASE("unreachable implicit target makes the LP infeasible") {
  Problem p = parse_problem_text(R"({
    "name": "stuck", "n": 1, "m": 1, "T": 1.0, "x0": [0.0],
    "f": ["0*u1"], "lagrangian": "0", "terminal_cost": "0",
    "omega": {"kind": "box", "lower": [-2.0], "upper": [2.0],
              "bounding_box": {"lower": [-2.0], "upper": [2.0]}},
    "target": {"kind": "implicit", "h": "x1-1",
               "bounding_box": {"lower": [-2.0], "upper": [2.0]}},
    "controls": {"lower": [-1.0], "upper": [1.0]}
  })");
  try {
    solve_occupation(p, GridSpec{10, 20, 5, 3}, Membership::Closed, 0.0);
    FAIL("expected OccError");
  } catch (const OccError& e) {
    CHECK(std::string(e.what()).find("infeasible") != std::string::npos);
  }
}

TEST_CASE("pushforward of a trajectory preserves mass") {
  Problem p = corpus_problem("example1.json");
  auto c = ClassicalControl::constant(Eigen::VectorXd::Constant(1, 1.0), p.T);
  Trajectory tr = integrate_classical(p, c, 1e-3);
  DiscreteOccupationMeasure dm = trajectory_measure(p, tr, c, GridSpec{});
  CHECK(std::abs(dm.total_mass() - p.T) <= 1e-12);
  CHECK(std::abs(dm.boundary_mass() - 1.0) <= 1e-12);
}

TEST_CASE("Liouville residual shrinks under joint refinement (classical)") {
  Problem p = corpus_problem("example1.json");
  auto c = ClassicalControl::constant(Eigen::VectorXd::Constant(1, 1.0), p.T);
  auto residual_at = [&](double dt, GridSpec g) {
    Trajectory tr = integrate_classical(p, c, dt);
    return liouville_residual(p, trajectory_measure(p, tr, c, g), 3);
  };
  double r0 = residual_at(1e-3, GridSpec{40, 80, 42, 3});
  double r1 = residual_at(5e-4, GridSpec{80, 160, 84, 3});
  CHECK(r0 <= 5e-2);
  CHECK(r1 <= r0 * 1.1);  // at least linear decrease, 10% jitter allowance
}

TEST_CASE("Liouville residual of a Young-measure pushforward") {
  Problem p = corpus_problem("example1.json");
  YoungMeasureControl y;
  y.time_grid = {0.0, 1.0};
  y.atoms = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
  y.weights = {{0.5, 0.5}};
  auto residual_at = [&](double dt, GridSpec g) {
    Trajectory tr = integrate_young(p, y, dt);
    return liouville_residual(p, trajectory_measure(p, tr, y, g), 3);
  };
  double r0 = residual_at(1e-3, GridSpec{40, 80, 42, 3});
  double r1 = residual_at(5e-4, GridSpec{80, 160, 84, 3});
  CHECK(r0 <= 5e-2);
  CHECK(r1 <= r0 * 1.1);
}
