#include "relaxgap/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

namespace relaxgap {
namespace {

using Kind = ExprNode::Kind;

ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprPtr lit(double v) {
  ExprNode n;
  n.kind = Kind::Literal;
  n.value = v;
  return make_node(std::move(n));
}

ExprPtr var(std::string name) {
  ExprNode n;
  n.kind = Kind::Variable;
  n.name = std::move(name);
  return make_node(std::move(n));
}

ExprPtr neg(ExprPtr a) {
  ExprNode n;
  n.kind = Kind::Negate;
  n.args = {std::move(a)};
  return make_node(std::move(n));
}

// Literals are always nonnegative in the tree; a negative constant is
// Negate(Literal) so printing round-trips structurally.
ExprPtr signed_lit(double v) { return v < 0 ? neg(lit(-v)) : lit(v); }

ExprPtr bin(BinaryOp op, ExprPtr a, ExprPtr b) {
  ExprNode n;
  n.kind = Kind::Binary;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return make_node(std::move(n));
}

ExprPtr call(Builtin fn, std::vector<ExprPtr> args) {
  ExprNode n;
  n.kind = Kind::Call;
  n.fn = fn;
  n.args = std::move(args);
  return make_node(std::move(n));
}

struct BuiltinInfo {
  const char* name;
  Builtin fn;
  int arity;
};

constexpr std::array<BuiltinInfo, 8> kBuiltins = {{
    {"sin", Builtin::Sin, 1},
    {"cos", Builtin::Cos, 1},
    {"exp", Builtin::Exp, 1},
    {"sqrt", Builtin::Sqrt, 1},
    {"abs", Builtin::Abs, 1},
    {"min", Builtin::Min, 2},
    {"max", Builtin::Max, 2},
    {"floor", Builtin::Floor, 1},
}};

const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return &b;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Parser.  Grammar (loosest to tightest): sum, product, unary minus, power,
// atom.  '^' is right-associative and binds tighter than unary minus.

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars)
      : src_(src), vars_(vars) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input at byte " + std::to_string(pos_),
                       pos_, {"end of input", "operator"});
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "' at byte " + std::to_string(pos_),
                       pos_, {what});
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  ExprPtr sum() {
    ExprPtr e = product();
    for (;;) {
      if (accept('+'))
        e = bin(BinaryOp::Add, e, product());
      else if (accept('-'))
        e = bin(BinaryOp::Sub, e, product());
      else
        return e;
    }
  }

  ExprPtr product() {
    ExprPtr e = unary();
    for (;;) {
      if (accept('*'))
        e = bin(BinaryOp::Mul, e, unary());
      else if (accept('/'))
        e = bin(BinaryOp::Div, e, unary());
      else
        return e;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return neg(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) return bin(BinaryOp::Pow, base, unary());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input at byte " + std::to_string(pos_), pos_,
                       {"number", "identifier", "'('"});
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = sum();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected character '") + c + "' at byte " +
                         std::to_string(pos_),
                     pos_, {"number", "identifier", "'('"});
  }

  ExprPtr number() {
    double value = 0.0;
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    auto [p, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc())
      throw ParseError("malformed number at byte " + std::to_string(pos_), pos_, {"number"});
    pos_ += static_cast<std::size_t>(p - begin);
    return lit(value);
  }

  ExprPtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (const BuiltinInfo* b = find_builtin(name)) {
      expect('(', "'(' after function name");
      std::vector<ExprPtr> args;
      args.push_back(sum());
      while (accept(',')) args.push_back(sum());
      expect(')', "')'");
      if (static_cast<int>(args.size()) != b->arity)
        throw ParseError(name + " takes " + std::to_string(b->arity) + " argument(s), got " +
                             std::to_string(args.size()) + " (byte " + std::to_string(start) + ")",
                         start, {name});
      return call(b->fn, std::move(args));
    }
    if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) {
      std::vector<std::string> declared(vars_.begin(), vars_.end());
      std::string msg = "unknown identifier '" + name + "' at byte " + std::to_string(start) +
                        "; declared variables:";
      for (const auto& v : declared) msg += " " + v;
      throw ParseError(std::move(msg), start, std::move(declared));
    }
    return var(std::move(name));
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer.  Precedence levels: 0 sum, 1 product, 2 unary minus, 3 power,
// 4 atom.  Children get parentheses when their level is too loose for the
// slot they occupy.

int node_level(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Literal:
    case Kind::Variable:
    case Kind::Call:
      return 4;
    case Kind::Negate:
      return 2;
    case Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return 0;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return 1;
        case BinaryOp::Pow:
          return 3;
      }
  }
  return 4;
}

void print_node(std::ostream& os, const ExprNode& n, int min_level);

void print_child(std::ostream& os, const ExprNode& child, int min_level) {
  if (node_level(child) < min_level) {
    os << '(';
    print_node(os, child, 0);
    os << ')';
  } else {
    print_node(os, child, 0);
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

void print_node(std::ostream& os, const ExprNode& n, int) {
  switch (n.kind) {
    case Kind::Literal:
      os << format_double(n.value);
      return;
    case Kind::Variable:
      os << n.name;
      return;
    case Kind::Negate:
      os << '-';
      // operand of unary minus sits at the power level or tighter
      print_child(os, *n.args[0], 2);
      return;
    case Kind::Binary: {
      const char* sym = nullptr;
      int lhs_min = 0, rhs_min = 0;
      switch (n.op) {
        case BinaryOp::Add: sym = "+"; lhs_min = 0; rhs_min = 1; break;
        case BinaryOp::Sub: sym = "-"; lhs_min = 0; rhs_min = 1; break;
        case BinaryOp::Mul: sym = "*"; lhs_min = 1; rhs_min = 2; break;
        case BinaryOp::Div: sym = "/"; lhs_min = 1; rhs_min = 2; break;
        case BinaryOp::Pow: sym = "^"; lhs_min = 4; rhs_min = 2; break;
      }
      print_child(os, *n.args[0], lhs_min);
      os << sym;
      print_child(os, *n.args[1], rhs_min);
      return;
    }
    case Kind::Call: {
      for (const auto& b : kBuiltins)
        if (b.fn == n.fn) os << b.name;
      os << '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) os << ',';
        print_node(os, *n.args[i], 0);
      }
      os << ')';
      return;
    }
  }
}

std::string print_subtree(const ExprPtr& p) {
  std::ostringstream os;
  print_node(os, *p, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation.

bool is_integer_value(double v) { return std::isfinite(v) && v == std::floor(v); }

double eval_pow(double x, double y, const ExprPtr& where) {
  if (x < 0 && !is_integer_value(y))
    throw EvalError("negative base with non-integer exponent", print_subtree(where));
  double r = std::pow(x, y);
  return r;
}

double eval_node(const ExprPtr& p, const Bindings& b) {
  const ExprNode& n = *p;
  switch (n.kind) {
    case Kind::Literal:
      return n.value;
    case Kind::Variable: {
      auto it = b.find(n.name);
      if (it == b.end()) throw EvalError("unbound variable '" + n.name + "'", n.name);
      return it->second;
    }
    case Kind::Negate:
      return -eval_node(n.args[0], b);
    case Kind::Binary: {
      double l = eval_node(n.args[0], b);
      double r = eval_node(n.args[1], b);
      switch (n.op) {
        case BinaryOp::Add: return l + r;
        case BinaryOp::Sub: return l - r;
        case BinaryOp::Mul: return l * r;
        case BinaryOp::Div:
          if (r == 0.0) throw EvalError("division by zero", print_subtree(p));
          return l / r;
        case BinaryOp::Pow: return eval_pow(l, r, p);
      }
      return 0;
    }
    case Kind::Call: {
      double a = eval_node(n.args[0], b);
      switch (n.fn) {
        case Builtin::Sin: return std::sin(a);
        case Builtin::Cos: return std::cos(a);
        case Builtin::Exp: return std::exp(a);
        case Builtin::Sqrt:
          if (a < 0) throw EvalError("sqrt of negative value", print_subtree(p));
          return std::sqrt(a);
        case Builtin::Abs: return std::abs(a);
        case Builtin::Floor: return std::floor(a);
        case Builtin::Min: return std::min(a, eval_node(n.args[1], b));
        case Builtin::Max: return std::max(a, eval_node(n.args[1], b));
      }
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation with light constant folding.

bool is_literal(const ExprPtr& p, double v) {
  return p->kind == Kind::Literal && p->value == v;
}

ExprPtr fold_add(ExprPtr a, ExprPtr b) {
  if (is_literal(a, 0)) return b;
  if (is_literal(b, 0)) return a;
  return bin(BinaryOp::Add, std::move(a), std::move(b));
}

ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
  if (is_literal(b, 0)) return a;
  if (is_literal(a, 0)) return neg(std::move(b));
  return bin(BinaryOp::Sub, std::move(a), std::move(b));
}

ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
  if (is_literal(a, 0) || is_literal(b, 0)) return lit(0);
  if (is_literal(a, 1)) return b;
  if (is_literal(b, 1)) return a;
  return bin(BinaryOp::Mul, std::move(a), std::move(b));
}

ExprPtr fold_div(ExprPtr a, ExprPtr b) {
  if (is_literal(a, 0)) return lit(0);
  if (is_literal(b, 1)) return a;
  return bin(BinaryOp::Div, std::move(a), std::move(b));
}

// Constant w.r.t. the variable being differentiated, not constant overall.
bool free_of(const ExprPtr& p, std::string_view v) {
  const ExprNode& n = *p;
  if (n.kind == Kind::Variable) return n.name != v;
  for (const auto& a : n.args)
    if (!free_of(a, v)) return false;
  return true;
}

// Returns nullptr when the derivative is not expressible in the grammar
// (nonsmooth builtin or a general power); the caller records the fallback.
ExprPtr diff(const ExprPtr& p, const std::string& v) {
  const ExprNode& n = *p;
  if (free_of(p, v)) return lit(0);
  switch (n.kind) {
    case Kind::Literal:
      return lit(0);
    case Kind::Variable:
      return lit(1);
    case Kind::Negate: {
      ExprPtr d = diff(n.args[0], v);
      return d ? neg(std::move(d)) : nullptr;
    }
    case Kind::Binary: {
      switch (n.op) {
        case BinaryOp::Add: {
          ExprPtr da = diff(n.args[0], v), db = diff(n.args[1], v);
          return (da && db) ? fold_add(da, db) : nullptr;
        }
        case BinaryOp::Sub: {
          ExprPtr da = diff(n.args[0], v), db = diff(n.args[1], v);
          return (da && db) ? fold_sub(da, db) : nullptr;
        }
        case BinaryOp::Mul: {
          ExprPtr da = diff(n.args[0], v), db = diff(n.args[1], v);
          if (!da || !db) return nullptr;
          return fold_add(fold_mul(da, n.args[1]), fold_mul(n.args[0], db));
        }
        case BinaryOp::Div: {
          ExprPtr da = diff(n.args[0], v), db = diff(n.args[1], v);
          if (!da || !db) return nullptr;
          ExprPtr num = fold_sub(fold_mul(da, n.args[1]), fold_mul(n.args[0], db));
          return fold_div(std::move(num),
                          bin(BinaryOp::Pow, n.args[1], lit(2)));
        }
        case BinaryOp::Pow: {
          // u^c with c free of v: c*u^(c-1)*u'.  The grammar has no log, so
          // anything with v in the exponent falls back to differences.
          if (!free_of(n.args[1], v)) return nullptr;
          ExprPtr du = diff(n.args[0], v);
          if (!du) return nullptr;
          ExprPtr c = n.args[1];
          ExprPtr cm1 = (c->kind == Kind::Literal)
                            ? signed_lit(c->value - 1)
                            : fold_sub(c, lit(1));
          ExprPtr powpart;
          if (c->kind == Kind::Literal && c->value == 1)
            powpart = lit(1);
          else if (c->kind == Kind::Literal && c->value == 2)
            powpart = n.args[0];
          else
            powpart = bin(BinaryOp::Pow, n.args[0], std::move(cm1));
          return fold_mul(fold_mul(c, std::move(powpart)), std::move(du));
        }
      }
      return nullptr;
    }
    case Kind::Call: {
      switch (n.fn) {
        case Builtin::Abs:
        case Builtin::Min:
        case Builtin::Max:
        case Builtin::Floor:
          return nullptr;  // nonsmooth: fallback flag
        default:
          break;
      }
      ExprPtr du = diff(n.args[0], v);
      if (!du) return nullptr;
      switch (n.fn) {
        case Builtin::Sin:
          return fold_mul(call(Builtin::Cos, {n.args[0]}), std::move(du));
        case Builtin::Cos:
          return neg(fold_mul(call(Builtin::Sin, {n.args[0]}), std::move(du)));
        case Builtin::Exp:
          return fold_mul(ExprPtr(p), std::move(du));
        case Builtin::Sqrt:
          return fold_div(std::move(du), fold_mul(lit(2), call(Builtin::Sqrt, {n.args[0]})));
        default:
          return nullptr;
      }
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Tape compiler.

enum TapeOp : int {
  kOpLit,
  kOpLoad,
  kOpNeg,
  kOpAdd,
  kOpSub,
  kOpMul,
  kOpDiv,
  kOpPow,
  kOpSin,
  kOpCos,
  kOpExp,
  kOpSqrt,
  kOpAbs,
  kOpFloor,
  kOpMin,
  kOpMax,
};

}  // namespace

Expr parse_expression(std::string_view source, std::span<const std::string> variables) {
  Parser p(source, variables);
  return Expr(p.parse());
}

std::string to_string(const Expr& e) {
  if (!e.valid()) return "";
  return print_subtree(e.root());
}

bool structurally_equal(const Expr& a, const Expr& b) {
  struct Cmp {
    static bool eq(const ExprPtr& x, const ExprPtr& y) {
      if (x == y) return true;
      if (!x || !y) return false;
      const ExprNode& a = *x;
      const ExprNode& b = *y;
      if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
      switch (a.kind) {
        case Kind::Literal:
          if (a.value != b.value) return false;
          break;
        case Kind::Variable:
          if (a.name != b.name) return false;
          break;
        case Kind::Binary:
          if (a.op != b.op) return false;
          break;
        case Kind::Call:
          if (a.fn != b.fn) return false;
          break;
        case Kind::Negate:
          break;
      }
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!eq(a.args[i], b.args[i])) return false;
      return true;
    }
  };
  return Cmp::eq(a.root(), b.root());
}

double eval(const Expr& e, const Bindings& bindings) {
  if (!e.valid()) throw EvalError("empty expression", "");
  return eval_node(e.root(), bindings);
}

bool depends_on(const Expr& e, std::string_view var) {
  return e.valid() && !free_of(e.root(), var);
}

Gradient gradient(const Expr& e, std::span<const std::string> vars) {
  Gradient g;
  g.partials.reserve(vars.size());
  g.fallback.reserve(vars.size());
  for (const auto& v : vars) {
    ExprPtr d = e.valid() ? diff(e.root(), v) : lit(0);
    if (d) {
      g.partials.emplace_back(std::move(d));
      g.fallback.push_back(false);
    } else {
      g.partials.emplace_back(lit(0));
      g.fallback.push_back(true);
    }
  }
  return g;
}

std::vector<double> eval_gradient(const Expr& e, const Bindings& at,
                                  std::span<const std::string> vars) {
  Gradient g = gradient(e, vars);
  std::vector<double> out(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!g.fallback[i]) {
      out[i] = eval(g.partials[i], at);
    } else {
      Bindings b = at;
      const double h = kFiniteDifferenceStep;
      b[vars[i]] = at.at(std::string(vars[i])) + h;
      double up = eval(e, b);
      b[vars[i]] = at.at(std::string(vars[i])) - h;
      double dn = eval(e, b);
      out[i] = (up - dn) / (2 * h);
    }
  }
  return out;
}

CompiledExpr compile(const Expr& e, std::span<const std::string> slot_order) {
  CompiledExpr c;
  if (!e.valid()) throw EvalError("empty expression", "");
  struct Emit {
    std::span<const std::string> order;
    std::vector<CompiledExpr::Instr>* tape;
    std::size_t depth = 0, max_depth = 0;

    void push_effect(int delta) {
      depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
      max_depth = std::max(max_depth, depth);
    }

    void walk(const ExprPtr& p) {
      const ExprNode& n = *p;
      switch (n.kind) {
        case Kind::Literal:
          tape->push_back({kOpLit, 0, n.value});
          push_effect(1);
          return;
        case Kind::Variable: {
          auto it = std::find(order.begin(), order.end(), n.name);
          if (it == order.end())
            throw EvalError("unbound variable '" + n.name + "' in compiled layout", n.name);
          tape->push_back({kOpLoad, static_cast<int>(it - order.begin()), 0.0});
          push_effect(1);
          return;
        }
        case Kind::Negate:
          walk(n.args[0]);
          tape->push_back({kOpNeg, 0, 0.0});
          return;
        case Kind::Binary: {
          walk(n.args[0]);
          walk(n.args[1]);
          int op = kOpAdd;
          switch (n.op) {
            case BinaryOp::Add: op = kOpAdd; break;
            case BinaryOp::Sub: op = kOpSub; break;
            case BinaryOp::Mul: op = kOpMul; break;
            case BinaryOp::Div: op = kOpDiv; break;
            case BinaryOp::Pow: op = kOpPow; break;
          }
          tape->push_back({op, 0, 0.0});
          push_effect(-1);
          return;
        }
        case Kind::Call: {
          for (const auto& a : n.args) walk(a);
          int op = kOpSin;
          switch (n.fn) {
            case Builtin::Sin: op = kOpSin; break;
            case Builtin::Cos: op = kOpCos; break;
            case Builtin::Exp: op = kOpExp; break;
            case Builtin::Sqrt: op = kOpSqrt; break;
            case Builtin::Abs: op = kOpAbs; break;
            case Builtin::Floor: op = kOpFloor; break;
            case Builtin::Min: op = kOpMin; break;
            case Builtin::Max: op = kOpMax; break;
          }
          tape->push_back({op, 0, 0.0});
          if (n.args.size() == 2) push_effect(-1);
          return;
        }
      }
    }
  };
  Emit em{slot_order, &c.tape_};
  em.walk(e.root());
  c.stack_need_ = em.max_depth;
  if (c.stack_need_ > 64)
    throw EvalError("expression too deep to compile (stack > 64)", to_string(e));
  return c;
}

double CompiledExpr::eval(std::span<const double> slots) const {
  double stack[64];
  std::size_t sp = 0;
  for (const Instr& in : tape_) {
    switch (in.opcode) {
      case kOpLit: stack[sp++] = in.value; break;
      case kOpLoad: stack[sp++] = slots[static_cast<std::size_t>(in.slot)]; break;
      case kOpNeg: stack[sp - 1] = -stack[sp - 1]; break;
      case kOpAdd: stack[sp - 2] += stack[sp - 1]; --sp; break;
      case kOpSub: stack[sp - 2] -= stack[sp - 1]; --sp; break;
      case kOpMul: stack[sp - 2] *= stack[sp - 1]; --sp; break;
      case kOpDiv:
        if (stack[sp - 1] == 0.0) throw EvalError("division by zero", "<compiled>");
        stack[sp - 2] /= stack[sp - 1];
        --sp;
        break;
      case kOpPow: {
        double x = stack[sp - 2], y = stack[sp - 1];
        if (x < 0 && !is_integer_value(y))
          throw EvalError("negative base with non-integer exponent", "<compiled>");
        stack[sp - 2] = std::pow(x, y);
        --sp;
        break;
      }
      case kOpSin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
      case kOpCos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
      case kOpExp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
      case kOpSqrt:
        if (stack[sp - 1] < 0) throw EvalError("sqrt of negative value", "<compiled>");
        stack[sp - 1] = std::sqrt(stack[sp - 1]);
        break;
      case kOpAbs: stack[sp - 1] = std::abs(stack[sp - 1]); break;
      case kOpFloor: stack[sp - 1] = std::floor(stack[sp - 1]); break;
      case kOpMin: stack[sp - 2] = std::min(stack[sp - 2], stack[sp - 1]); --sp; break;
      case kOpMax: stack[sp - 2] = std::max(stack[sp - 2], stack[sp - 1]); --sp; break;
    }
  }
  return stack[0];
}

}  // namespace relaxgap
