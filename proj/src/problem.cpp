#include "relaxgap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relaxgap/rng.hpp"

namespace relaxgap {

using nlohmann::json;

// ---------------------------------------------------------------------------
// BoxSpec

bool BoxSpec::contains(const Eigen::VectorXd& x, Membership mode) const {
  for (int i = 0; i < dim(); ++i) {
    if (mode == Membership::Open) {
      if (!(x[i] > lower[i] && x[i] < upper[i])) return false;
    } else {
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    }
  }
  return true;
}

double BoxSpec::distance(const Eigen::VectorXd& x) const {
  double sq = 0;
  for (int i = 0; i < dim(); ++i) {
    double d = std::max({lower[i] - x[i], x[i] - upper[i], 0.0});
    sq += d * d;
  }
  return std::sqrt(sq);
}

void BoxSpec::validate(const std::string& what) const {
  if (lower.size() != upper.size())
    throw ProblemError(what + " bounds", what + ": lower/upper length mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!(lower[i] <= upper[i]))
      throw ProblemError(what + " lower <= upper",
                         what + ": lower > upper in component " + std::to_string(i + 1));
}

// ---------------------------------------------------------------------------
// RegionSpec

RegionSpec RegionSpec::make_box(Eigen::VectorXd lo, Eigen::VectorXd hi,
                                std::optional<BoxSpec> bbox) {
  RegionSpec r;
  r.kind = RegionKind::Box;
  r.lower = std::move(lo);
  r.upper = std::move(hi);
  r.bounding_box = bbox ? *bbox : BoxSpec{r.lower, r.upper};
  return r;
}

RegionSpec RegionSpec::make_implicit(Expr h, BoxSpec bbox) {
  RegionSpec r;
  r.kind = RegionKind::Implicit;
  r.h = std::move(h);
  r.bounding_box = std::move(bbox);
  return r;
}

const CompiledExpr& RegionSpec::compiled_h() const {
  if (!h_ready_) {
    auto names = state_var_names(dim());
    h_compiled_ = compile(h, names);
    h_ready_ = true;
  }
  return h_compiled_;
}

double RegionSpec::h_value(const Eigen::VectorXd& x) const {
  return compiled_h().eval(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

bool RegionSpec::contains(const Eigen::VectorXd& x, Membership mode) const {
  if (!bounding_box.contains(x, Membership::Closed)) return false;
  if (kind == RegionKind::Box) {
    BoxSpec b{lower, upper};
    return b.contains(x, mode);
  }
  double h = h_value(x);
  return mode == Membership::Open ? h > 0 : h >= 0;
}

double RegionSpec::violation(const Eigen::VectorXd& x) const {
  double v;
  if (kind == RegionKind::Box)
    v = BoxSpec{lower, upper}.distance(x);
  else
    v = std::max(0.0, -h_value(x));
  return std::max(v, bounding_box.distance(x));
}

void RegionSpec::validate(const std::string& what, int n) const {
  bounding_box.validate(what + " bounding_box");
  if (bounding_box.dim() != n)
    throw ProblemError(what + " dimension", what + ": bounding box dimension != n");
  for (int i = 0; i < n; ++i)
    if (!(bounding_box.upper[i] - bounding_box.lower[i] > 0))
      throw ProblemError(what + " bounding_box side > 0",
                         what + ": bounding box side " + std::to_string(i + 1) +
                             " has zero length");
  if (kind == RegionKind::Box) {
    if (lower.size() != n || upper.size() != n)
      throw ProblemError(what + " dimension", what + ": box bounds length != n");
    BoxSpec{lower, upper}.validate(what);
  } else {
    if (!h.valid()) throw ProblemError(what + " h", what + ": implicit region without h");
    // continuity proxy: finite evaluation on bounding-box samples
    Rng rng(0x5eedu);
    Bindings b;
    auto names = state_var_names(n);
    for (int s = 0; s < 100; ++s) {
      for (int i = 0; i < n; ++i)
        b[names[static_cast<std::size_t>(i)]] =
            rng.uniform(bounding_box.lower[i], bounding_box.upper[i]);
      double v = eval(h, b);
      if (!std::isfinite(v))
        throw ProblemError(what + " h finite on bounding box",
                           what + ": h evaluates nonfinite inside the bounding box");
    }
  }
}

bool region_contains(const RegionSpec& r, const Eigen::VectorXd& x, Membership mode) {
  return r.contains(x, mode);
}

// ---------------------------------------------------------------------------
// Controls

void YoungMeasureControl::validate(const BoxSpec& controls, double T) const {
  if (time_grid.size() < 2 || time_grid.front() != 0.0 ||
      std::abs(time_grid.back() - T) > 1e-12)
    throw ProblemError("young time_grid", "time grid must run from 0 to T");
  for (std::size_t k = 1; k < time_grid.size(); ++k)
    if (!(time_grid[k] > time_grid[k - 1]))
      throw ProblemError("young time_grid increasing", "time grid must be increasing");
  if (weights.size() != time_grid.size() - 1)
    throw ProblemError("young weights rows", "need one weight row per interval");
  for (const auto& a : atoms)
    if (!controls.contains(a, Membership::Closed))
      throw ProblemError("young atoms in U", "atom outside the control box");
  for (const auto& row : weights) {
    if (row.size() != atoms.size())
      throw ProblemError("young weights cols", "weight row length != number of atoms");
    double sum = 0;
    for (double w : row) {
      if (w < 0) throw ProblemError("young weights >= 0", "negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ProblemError("young weights row sum 1", "weight row does not sum to 1");
  }
}

ClassicalControl ClassicalControl::constant(const Eigen::VectorXd& u, double T) {
  ClassicalControl c;
  c.time_grid = {0.0, T};
  c.values = {u};
  return c;
}

const Eigen::VectorXd& ClassicalControl::value_at(double t) const {
  auto it = std::upper_bound(time_grid.begin(), time_grid.end(), t);
  std::size_t idx = it == time_grid.begin() ? 0 : static_cast<std::size_t>(it - time_grid.begin()) - 1;
  if (idx >= values.size()) idx = values.size() - 1;
  return values[idx];
}

void ClassicalControl::validate(const BoxSpec& controls, double T) const {
  if (time_grid.size() < 2 || time_grid.front() != 0.0 ||
      std::abs(time_grid.back() - T) > 1e-9)
    throw ProblemError("control time_grid", "time grid must run from 0 to T");
  for (std::size_t k = 1; k < time_grid.size(); ++k)
    if (!(time_grid[k] > time_grid[k - 1]))
      throw ProblemError("control time_grid increasing", "time grid must be increasing");
  if (values.size() != time_grid.size() - 1)
    throw ProblemError("control values", "need one value per interval");
  for (const auto& v : values)
    if (!controls.contains(v, Membership::Closed))
      throw ProblemError("control values in U", "control value outside U");
}

// ---------------------------------------------------------------------------
// Problem

std::vector<std::string> state_var_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<std::string> txu_var_names(int n, int m) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(1 + n + m));
  names.emplace_back("t");
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m; ++i) names.push_back("u" + std::to_string(i));
  return names;
}

bool Problem::autonomous() const {
  for (const auto& e : f)
    if (depends_on(e, "t")) return false;
  return !depends_on(lagrangian, "t");
}

void Problem::finalize() {
  if (n < 1) throw ProblemError("n >= 1", "state dimension must be positive");
  if (m < 1) throw ProblemError("m >= 1", "control dimension must be positive");
  if (!(T > 0)) throw ProblemError("T > 0", "horizon must be positive");
  if (x0.size() != n) throw ProblemError("len(x0) = n", "x0 has wrong length");
  if (static_cast<int>(f.size()) != n)
    throw ProblemError("len(f) = n", "f has wrong number of components");

  txu_names = txu_var_names(n, m);
  x_names = state_var_names(n);

  controls.validate("controls");
  if (controls.dim() != m) throw ProblemError("controls dimension", "control box length != m");
  omega.validate("omega", n);
  target.validate("target", n);

  if (!omega.contains(x0, Membership::Closed))
    throw ProblemError("x0 in omega", "initial point is not in the domain");

  f_compiled.clear();
  for (const auto& e : f) f_compiled.push_back(compile(e, txu_names));
  lagrangian_compiled = compile(lagrangian, txu_names);
  terminal_cost_compiled = compile(terminal_cost, x_names);

  // f, L finite on random samples of [0,T] x box(omega) x U
  Rng rng(0xf17e55u);
  std::vector<double> slots(static_cast<std::size_t>(1 + n + m));
  for (int s = 0; s < 100; ++s) {
    slots[0] = rng.uniform(0, T);
    for (int i = 0; i < n; ++i)
      slots[static_cast<std::size_t>(1 + i)] =
          rng.uniform(omega.bounding_box.lower[i], omega.bounding_box.upper[i]);
    for (int i = 0; i < m; ++i)
      slots[static_cast<std::size_t>(1 + n + i)] =
          rng.uniform(controls.lower[i], controls.upper[i]);
    try {
      for (const auto& fc : f_compiled)
        if (!std::isfinite(fc.eval(slots)))
          throw ProblemError("f finite on samples", "f nonfinite on a domain sample");
      if (!std::isfinite(lagrangian_compiled.eval(slots)))
        throw ProblemError("L finite on samples", "L nonfinite on a domain sample");
    } catch (const EvalError& e) {
      throw ProblemError("f,L finite on samples",
                         std::string("f or L fails to evaluate on a domain sample: ") + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

Eigen::VectorXd vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ProblemError(where, where + ": expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ProblemError(where, where + ": expected numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ProblemError(where + "." + key, "missing field " + where + "." + key);
  return *it;
}

Expr parse_field(const json& j, const std::string& where,
                 const std::vector<std::string>& vars) {
  if (!j.is_string()) throw ProblemError(where, where + ": expected an expression string");
  try {
    return parse_expression(j.get<std::string>(), vars);
  } catch (const ParseError& e) {
    throw ProblemError(where, where + ": " + e.what());
  }
}

RegionSpec region_from_json(const json& j, const std::string& where, int n) {
  std::string kind = need(j, "kind", where).get<std::string>();
  const json& bb = need(j, "bounding_box", where);
  BoxSpec bbox{vec_from_json(need(bb, "lower", where + ".bounding_box"), where),
               vec_from_json(need(bb, "upper", where + ".bounding_box"), where)};
  if (kind == "box") {
    return RegionSpec::make_box(vec_from_json(need(j, "lower", where), where + ".lower"),
                                vec_from_json(need(j, "upper", where), where + ".upper"),
                                bbox);
  }
  if (kind == "implicit") {
    Expr h = parse_field(need(j, "h", where), where + ".h", state_var_names(n));
    return RegionSpec::make_implicit(std::move(h), std::move(bbox));
  }
  throw ProblemError(where + ".kind", where + ".kind must be \"implicit\" or \"box\"");
}

}  // namespace

Problem parse_problem_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ProblemError("json", std::string("problem file is not valid JSON: ") + e.what());
  }
  Problem p;
  p.name = need(j, "name", "problem").get<std::string>();
  p.n = need(j, "n", "problem").get<int>();
  p.m = need(j, "m", "problem").get<int>();
  // horizon key: "T" per the schema, lowercase "t" also accepted
  if (j.contains("T"))
    p.T = j["T"].get<double>();
  else
    p.T = need(j, "t", "problem").get<double>();
  p.x0 = vec_from_json(need(j, "x0", "problem"), "problem.x0");

  auto txu = txu_var_names(p.n, p.m);
  const json& fj = need(j, "f", "problem");
  if (!fj.is_array()) throw ProblemError("problem.f", "problem.f must be an array of strings");
  for (std::size_t i = 0; i < fj.size(); ++i)
    p.f.push_back(parse_field(fj[i], "problem.f[" + std::to_string(i) + "]", txu));
  p.lagrangian = parse_field(need(j, "lagrangian", "problem"), "problem.lagrangian", txu);
  p.terminal_cost = parse_field(need(j, "terminal_cost", "problem"), "problem.terminal_cost",
                                state_var_names(p.n));

  p.omega = region_from_json(need(j, "omega", "problem"), "problem.omega", p.n);
  p.target = region_from_json(need(j, "target", "problem"), "problem.target", p.n);

  const json& cj = need(j, "controls", "problem");
  p.controls = BoxSpec{vec_from_json(need(cj, "lower", "problem.controls"), "problem.controls.lower"),
                       vec_from_json(need(cj, "upper", "problem.controls"), "problem.controls.upper")};

  p.finalize();
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("file", "cannot open problem file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

YoungMeasureControl load_young_measure(const std::string& path, const Problem& p) {
  std::ifstream in(path);
  if (!in) throw ProblemError("file", "cannot open young-measure file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError("json", std::string("young-measure file is not valid JSON: ") + e.what());
  }
  YoungMeasureControl y;
  for (const auto& t : need(j, "time_grid", "ym")) y.time_grid.push_back(t.get<double>());
  for (const auto& a : need(j, "atoms", "ym"))
    y.atoms.push_back(vec_from_json(a, "ym.atoms"));
  for (const auto& row : need(j, "weights", "ym")) {
    std::vector<double> r;
    for (const auto& w : row) r.push_back(w.get<double>());
    y.weights.push_back(std::move(r));
  }
  y.validate(p.controls, p.T);
  return y;
}

ClassicalControl load_classical_control(const std::string& path, const Problem& p) {
  std::ifstream in(path);
  if (!in) throw ProblemError("file", "cannot open control file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError("json", std::string("control file is not valid JSON: ") + e.what());
  }
  const json& cj = j.contains("control") ? j["control"] : j;
  ClassicalControl c;
  for (const auto& t : need(cj, "time_grid", "control")) c.time_grid.push_back(t.get<double>());
  for (const auto& v : need(cj, "values", "control"))
    c.values.push_back(vec_from_json(v, "control.values"));
  c.validate(p.controls, p.T);
  return c;
}

}  // namespace relaxgap
