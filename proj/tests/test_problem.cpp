#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relaxgap/corpus.hpp"
#include "relaxgap/problem.hpp"
#include "relaxgap/rng.hpp"

using namespace relaxgap;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus_file(const std::string& name) {
  return std::string(RELAXGAP_CORPUS_PATH) + "/" + name;
}

}  // namespace

TEST_CASE("example1 loads with the expected shape") {
  Problem p = load_problem(corpus_file("example1.json"));
  CHECK(p.name == "example1");
  CHECK(p.n == 1);
  CHECK(p.m == 1);
  CHECK(p.T == doctest::Approx(1.0));
  CHECK(p.x0[0] == doctest::Approx(0.0));
  CHECK(p.autonomous());
  CHECK(p.omega.kind == RegionKind::Box);
  CHECK(p.controls.lower[0] == doctest::Approx(-1.0));
  // L(x=0,u=0) = 1 via the compiled evaluator, layout (t, x1, u1)
  double slots[3] = {0.0, 0.0, 0.0};
  CHECK(p.lagrangian_compiled.eval(std::span<const double>(slots, 3)) == doctest::Approx(1.0));
}

TEST_CASE("every bundled example loads") {
  for (const auto& d : list_examples()) {
    if (d.optional) continue;
    CAPTURE(d.name);
    CHECK_NOTHROW(load_problem(corpus_file(d.file)));
  }
  CHECK_THROWS_AS(find_example("nonesuch"), ProblemError);
}

TEST_CASE("validation failures are named") {
  std::string base = slurp(corpus_file("example1.json"));

  auto patched = [&](const std::string& from, const std::string& to) {
    std::string s = base;
    s.replace(s.find(from), from.size(), to);
    return s;
  };

  try {
    parse_problem_text(patched("\"x0\": [0.0]", "\"x0\": [5.0]"));
    FAIL("expected ProblemError");
  } catch (const ProblemError& e) {
    CHECK(e.check == "x0 in omega");
  }
  try {
    parse_problem_text(patched("\"T\": 1.0", "\"T\": 0.0"));
    FAIL("expected ProblemError");
  } catch (const ProblemError& e) {
    CHECK(e.check == "T > 0");
  }
  CHECK_THROWS_AS(parse_problem_text(patched("\"lagrangian\": \"(u1^2-1)^2 + x1^2\"",
                                             "\"lagrangian\": \"(u9^2-1)^2\"")),
                  ProblemError);
  CHECK_THROWS_AS(parse_problem_text("{ not json"), ProblemError);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ProblemError);
}

TEST_CASE("lowercase horizon key is accepted") {
  std::string s = slurp(corpus_file("zero.json"));
  s.replace(s.find("\"T\":"), 4, "\"t\":");
  Problem p = parse_problem_text(s);
  CHECK(p.T == doctest::Approx(1.0));
}

TEST_CASE("open membership implies closed membership") {
  Rng rng(3);
  for (const auto& d : list_examples()) {
    if (d.optional) continue;
    Problem p = load_problem(corpus_file(d.file));
    for (const RegionSpec* r : {&p.omega, &p.target}) {
      for (int s = 0; s < 2000; ++s) {
        Eigen::VectorXd x(p.n);
        for (int i = 0; i < p.n; ++i)
          x[i] = rng.uniform(r->bounding_box.lower[i] - 0.5, r->bounding_box.upper[i] + 0.5);
        if (r->contains(x, Membership::Open)) CHECK(r->contains(x, Membership::Closed));
      }
    }
  }
}

TEST_CASE("region violation pins") {
  Problem box = load_problem(corpus_file("example1.json"));
  Eigen::VectorXd x(1);
  x << 3.0;
  CHECK(box.omega.violation(x) == doctest::Approx(1.0));
  x << 1.0;
  CHECK(box.omega.violation(x) == doctest::Approx(0.0));

  Problem disk = load_problem(corpus_file("tangential_disk.json"));
  Eigen::VectorXd y(2);
  y << 0.5, 0.0;
  CHECK(disk.omega.violation(y) == doctest::Approx(0.0));
  CHECK(disk.omega.h_value(y) == doctest::Approx(0.75));
  y << 1.1, 0.0;  // h = 1 - 1.21
  CHECK(disk.omega.violation(y) == doctest::Approx(0.21));
}

TEST_CASE("young measure validation") {
  Problem p = load_problem(corpus_file("example1.json"));
  YoungMeasureControl y;
  y.time_grid = {0.0, 1.0};
  y.atoms = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
  y.weights = {{0.5, 0.5}};
  CHECK_NOTHROW(y.validate(p.controls, p.T));

  auto bad = y;
  bad.weights = {{0.6, 0.5}};
  CHECK_THROWS_AS(bad.validate(p.controls, p.T), ProblemError);
  bad = y;
  bad.atoms[0][0] = 2.0;  // outside U = [-1,1]
  CHECK_THROWS_AS(bad.validate(p.controls, p.T), ProblemError);
  bad = y;
  bad.weights = {{1.0}};
  CHECK_THROWS_AS(bad.validate(p.controls, p.T), ProblemError);
}

TEST_CASE("classical control validation and lookup") {
  Problem p = load_problem(corpus_file("example1.json"));
  ClassicalControl c;
  c.time_grid = {0.0, 0.25, 1.0};
  c.values = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
  CHECK_NOTHROW(c.validate(p.controls, p.T));
  CHECK(c.value_at(0.1)[0] == doctest::Approx(1.0));
  CHECK(c.value_at(0.25)[0] == doctest::Approx(-1.0));  // right-continuous
  CHECK(c.value_at(1.0)[0] == doctest::Approx(-1.0));

  auto bad = c;
  bad.time_grid = {0.0, 0.5, 0.5, 1.0};
  CHECK_THROWS_AS(bad.validate(p.controls, p.T), ProblemError);
  bad = c;
  bad.values.pop_back();
  CHECK_THROWS_AS(bad.validate(p.controls, p.T), ProblemError);
}
