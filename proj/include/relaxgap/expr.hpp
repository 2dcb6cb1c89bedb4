#ifndef RELAXGAP_EXPR_HPP_
#define RELAXGAP_EXPR_HPP_

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relaxgap {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Builtin { Sin, Cos, Exp, Sqrt, Abs, Min, Max, Floor };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Literal, Variable, Negate, Binary, Call };
  Kind kind = Kind::Literal;
  double value = 0.0;           // Literal
  std::string name;             // Variable
  BinaryOp op = BinaryOp::Add;  // Binary
  Builtin fn = Builtin::Sin;    // Call
  std::vector<ExprPtr> args;
};

/// Immutable expression tree.  All operations on Expr are pure; sharing
/// subtrees across threads is safe.
class Expr {
 public:
  Expr() = default;
  explicit Expr(ExprPtr root) : root_(std::move(root)) {}
  const ExprPtr& root() const { return root_; }
  bool valid() const { return root_ != nullptr; }

 private:
  ExprPtr root_;
};

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t off, std::vector<std::string> exp)
      : std::runtime_error(std::move(msg)), offset(off), expected(std::move(exp)) {}
  std::size_t offset = 0;            // byte offset into the source string
  std::vector<std::string> expected; // expected tokens / declared names
};

struct EvalError : std::runtime_error {
  EvalError(std::string msg, std::string sub)
      : std::runtime_error(std::move(msg)), subexpression(std::move(sub)) {}
  std::string subexpression;  // printed form of the offending subtree
};

using Bindings = std::map<std::string, double>;

/// Parses `source` against the fixed grammar.  Identifiers must appear in
/// `variables` or be one of the builtin function names.
Expr parse_expression(std::string_view source, std::span<const std::string> variables);

/// Prints so that parse_expression(to_string(e)) is structurally identical.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

double eval(const Expr& e, const Bindings& bindings);

bool depends_on(const Expr& e, std::string_view var);

struct Gradient {
  std::vector<Expr> partials;  // meaningful only where fallback[i] is false
  std::vector<bool> fallback;  // true: use central finite differences instead
};

/// Symbolic partials w.r.t. each of `vars`.  Subtrees of floor/abs/min/max
/// (and general powers) that involve the variable set the fallback flag.
Gradient gradient(const Expr& e, std::span<const std::string> vars);

/// Step mandated for the finite-difference fallback of `gradient`.
inline constexpr double kFiniteDifferenceStep = 1e-6;

/// Gradient values at a point: symbolic where available, central finite
/// differences (step kFiniteDifferenceStep) on fallback-flagged vars.
std::vector<double> eval_gradient(const Expr& e, const Bindings& at,
                                  std::span<const std::string> vars);

/// Flat postfix tape for fast repeated evaluation with a fixed variable
/// layout.  eval() takes the slot values in the order given to compile().
class CompiledExpr {
 public:
  CompiledExpr() = default;
  double eval(std::span<const double> slots) const;

 private:
  friend CompiledExpr compile(const Expr&, std::span<const std::string>);
  struct Instr {
    int opcode = 0;      // see expr.cpp
    int slot = 0;        // variable slot for load
    double value = 0.0;  // literal payload
  };
  std::vector<Instr> tape_;
  std::size_t stack_need_ = 0;
};

CompiledExpr compile(const Expr& e, std::span<const std::string> slot_order);

}  // namespace relaxgap

#endif  // RELAXGAP_EXPR_HPP_
