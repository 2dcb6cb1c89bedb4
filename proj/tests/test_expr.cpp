#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relaxgap/expr.hpp"
#include "relaxgap/rng.hpp"

using namespace relaxgap;

namespace {

const std::vector<std::string> kVars = {"t", "x1", "u1"};

Expr parse(const std::string& s) { return parse_expression(s, kVars); }

// Random AST generator for the round-trip property.  Literals are kept
// nonnegative: the grammar spells a negative constant as Negate(Literal), so
// a raw negative literal would not survive parse(print(.)) structurally.
ExprPtr random_ast(Rng& rng, int depth) {
  auto node = std::make_shared<ExprNode>();
  int pick = depth == 0 ? static_cast<int>(rng.uniform_index(2))
                        : static_cast<int>(rng.uniform_index(5));
  switch (pick) {
    case 0:
      node->kind = ExprNode::Kind::Literal;
      node->value = std::floor(rng.uniform(0, 100)) / 8.0;
      break;
    case 1:
      node->kind = ExprNode::Kind::Variable;
      node->name = kVars[rng.uniform_index(kVars.size())];
      break;
    case 2:
      node->kind = ExprNode::Kind::Negate;
      node->args.push_back(random_ast(rng, depth - 1));
      break;
    case 3: {
      node->kind = ExprNode::Kind::Binary;
      node->op = static_cast<BinaryOp>(rng.uniform_index(5));
      node->args.push_back(random_ast(rng, depth - 1));
      node->args.push_back(random_ast(rng, depth - 1));
      break;
    }
    default: {
      node->kind = ExprNode::Kind::Call;
      node->fn = static_cast<Builtin>(rng.uniform_index(8));
      node->args.push_back(random_ast(rng, depth - 1));
      if (node->fn == Builtin::Min || node->fn == Builtin::Max)
        node->args.push_back(random_ast(rng, depth - 1));
      break;
    }
  }
  return node;
}

}  // namespace

TEST_CASE("parse/print round trip on random ASTs") {
  Rng rng(42);
  for (int i = 0; i < 120; ++i) {
    Expr e(random_ast(rng, 6));
    std::string printed = to_string(e);
    Expr back = parse(printed);
    CAPTURE(printed);
    CHECK(structurally_equal(e, back));
  }
}

TEST_CASE("evaluation pins") {
  Expr L = parse("(u1^2-1)^2 + x1^2");
  CHECK(eval(L, {{"x1", 0.0}, {"u1", 1.0}}) == doctest::Approx(0.0));
  CHECK(eval(L, {{"x1", 0.0}, {"u1", 0.0}}) == doctest::Approx(1.0));
  // (-1)^floor(4t) at t=0.3: floor(1.2)=1
  Expr sq = parse("(0-1)^floor(4*t)");
  CHECK(eval(sq, {{"t", 0.3}}) == doctest::Approx(-1.0));
  CHECK(eval(sq, {{"t", 0.1}}) == doctest::Approx(1.0));
}

TEST_CASE("unary minus and power precedence") {
  // ^ binds tighter than unary minus; right-associative
  CHECK(eval(parse("-2^2"), {}) == doctest::Approx(-4.0));
  CHECK(eval(parse("2^3^2"), {}) == doctest::Approx(512.0));
  CHECK(eval(parse("2-3-4"), {}) == doctest::Approx(-5.0));
}

TEST_CASE("parse errors carry offset and expectations") {
  CHECK_THROWS_AS(parse("x1 +"), ParseError);
  CHECK_THROWS_AS(parse("y2 + 1"), ParseError);  // undeclared identifier
  CHECK_THROWS_AS(parse("sin()"), ParseError);
  CHECK_THROWS_AS(parse("(x1"), ParseError);
  try {
    parse("x1 + @");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(eval(parse("1/(x1-1)"), {{"x1", 1.0}}), EvalError);
  CHECK_THROWS_AS(eval(parse("sqrt(0-2)"), {}), EvalError);
  // negative base with non-integer exponent has no real value
  CHECK_THROWS_AS(eval(parse("(0-2)^0.5"), {}), EvalError);
  CHECK(eval(parse("(0-2)^3"), {}) == doctest::Approx(-8.0));
}

TEST_CASE("symbolic gradient pins") {
  // d/du1 of the double-well Lagrangian: 4u(u^2-1), zero at u=1
  Expr L = parse("(u1^2-1)^2 + x1^2");
  auto g = eval_gradient(L, {{"x1", 0.0}, {"u1", 1.0}}, kVars);
  CHECK(g[2] == doctest::Approx(0.0).epsilon(1e-9));
  auto g2 = eval_gradient(L, {{"x1", 3.0}, {"u1", 2.0}}, kVars);
  CHECK(g2[1] == doctest::Approx(6.0));
  CHECK(g2[2] == doctest::Approx(24.0));  // 4*2*(4-1)
}

TEST_CASE("symbolic gradient matches central differences on smooth exprs") {
  const std::vector<std::string> smooth = {
      "sin(x1)*cos(t) + u1^3",
      "exp(x1/4) - t*u1",
      "x1^2*u1 + sqrt(x1+10)",
      "(x1+2*u1)/(t+5)",
  };
  Rng rng(7);
  for (const auto& src : smooth) {
    Expr e = parse(src);
    for (int s = 0; s < 20; ++s) {
      Bindings at{{"t", rng.uniform(0, 1)}, {"x1", rng.uniform(-1, 1)},
                  {"u1", rng.uniform(-1, 1)}};
      auto g = eval_gradient(e, at, kVars);
      for (std::size_t v = 0; v < kVars.size(); ++v) {
        Bindings lo = at, hi = at;
        const double h = 1e-6;
        lo[kVars[v]] -= h;
        hi[kVars[v]] += h;
        double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
        CHECK(g[v] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("nonsmooth builtins fall back to finite differences away from kinks") {
  Expr e = parse("abs(x1) + max(u1, 0.5)");
  auto grad = gradient(e, kVars);
  CHECK(grad.fallback[1]);
  CHECK(grad.fallback[2]);
  auto g = eval_gradient(e, {{"t", 0.0}, {"x1", -2.0}, {"u1", 3.0}}, kVars);
  CHECK(g[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("depends_on") {
  CHECK(depends_on(parse("x1*sin(t)"), "t"));
  CHECK(!depends_on(parse("x1*u1"), "t"));
}

TEST_CASE("compiled tape agrees with tree evaluation") {
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    Expr e(random_ast(rng, 5));
    CompiledExpr ce = compile(e, kVars);
    double vals[3] = {rng.uniform(0.1, 2), rng.uniform(0.1, 2), rng.uniform(0.1, 2)};
    Bindings b{{"t", vals[0]}, {"x1", vals[1]}, {"u1", vals[2]}};
    double tree, tape;
    try {
      tree = eval(e, b);
    } catch (const EvalError&) {
      CHECK_THROWS_AS(ce.eval(std::span<const double>(vals, 3)), EvalError);
      continue;
    }
    tape = ce.eval(std::span<const double>(vals, 3));
    if (std::isfinite(tree)) {
      CHECK(tape == doctest::Approx(tree).epsilon(1e-12));
    }
  }
}
