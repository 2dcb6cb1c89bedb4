#include "relaxgap/occmeas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

namespace relaxgap {

namespace {

// Axis of a uniform cell grid: centers at lo + (i + 1/2) w.
struct Axis {
  double lo = 0, hi = 1;
  int cells = 1;
  double width() const { return (hi - lo) / cells; }
  double center(int i) const { return lo + (i + 0.5) * width(); }
  int clamp_index(double v) const {
    int i = static_cast<int>(std::floor((v - lo) / width()));
    return std::clamp(i, 0, cells - 1);
  }
};

struct CellGrids {
  Axis t;
  std::vector<Axis> x;  // over boundingBox(omega)
  std::vector<Axis> u;  // over U
  std::vector<Axis> bx; // over boundingBox(target)
};

CellGrids make_grids(const Problem& p, const GridSpec& g) {
  CellGrids cg;
  cg.t = {0, p.T, g.nt};
  for (int i = 0; i < p.n; ++i)
    cg.x.push_back({p.omega.bounding_box.lower[i], p.omega.bounding_box.upper[i], g.nx});
  for (int i = 0; i < p.m; ++i)
    cg.u.push_back({p.controls.lower[i], p.controls.upper[i], g.nu});
  for (int i = 0; i < p.n; ++i)
    cg.bx.push_back({p.target.bounding_box.lower[i], p.target.bounding_box.upper[i], g.nx});
  return cg;
}

bool advance(std::vector<int>& idx, const std::vector<Axis>& axes) {
  for (std::size_t d = 0; d < idx.size(); ++d) {
    if (++idx[d] < axes[d].cells) return true;
    idx[d] = 0;
  }
  return false;
}

bool center_feasible(const RegionSpec& r, const Eigen::VectorXd& x, Membership mode,
                     double eps) {
  if (eps > 0) {
    if (r.kind != RegionKind::Implicit)
      throw OccError("shrink eps > 0 requires an implicit region (needs h)");
    if (!r.bounding_box.contains(x, Membership::Closed)) return false;
    double h = r.h_value(x);
    return mode == Membership::Open ? h > eps : h >= eps;
  }
  return r.contains(x, mode);
}

// phi = t^a * prod x_i^(alpha_i) and its Liouville coefficient
double mono_value(const Monomial& mo, double t, const Eigen::VectorXd& x) {
  double v = std::pow(t, mo[0]);
  for (std::size_t i = 1; i < mo.size(); ++i) v *= std::pow(x[static_cast<int>(i) - 1], mo[i]);
  return v;
}

// d(phi)/dt + grad_x(phi) . f
double mono_liouville(const Monomial& mo, double t, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& fval) {
  double c = 0;
  if (mo[0] > 0) {
    double v = mo[0] * std::pow(t, mo[0] - 1);
    for (std::size_t i = 1; i < mo.size(); ++i) v *= std::pow(x[static_cast<int>(i) - 1], mo[i]);
    c += v;
  }
  for (std::size_t i = 1; i < mo.size(); ++i) {
    if (mo[i] == 0) continue;
    double v = mo[i] * std::pow(t, mo[0]);
    for (std::size_t j = 1; j < mo.size(); ++j) {
      int e = mo[j] - (j == i ? 1 : 0);
      v *= std::pow(x[static_cast<int>(j) - 1], e);
    }
    c += v * fval[static_cast<int>(i) - 1];
  }
  return c;
}

std::string mono_name(const Monomial& mo) {
  std::string s = "phi";
  s += "_t" + std::to_string(mo[0]);
  for (std::size_t i = 1; i < mo.size(); ++i) s += "_x" + std::to_string(mo[i]);
  return s;
}

}  // namespace

void GridSpec::validate() const {
  if (nt < 2 || nx < 2 || nu < 2) throw OccError("grid cell counts must be >= 2");
  if (test_degree < 1) throw OccError("test degree must be >= 1");
}

std::vector<Monomial> test_monomials(int n, int max_degree) {
  std::vector<Monomial> out;
  Monomial mo(static_cast<std::size_t>(n) + 1, 0);
  // counts in colex order over total degree
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n + 1) {
      out.push_back(mo);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      mo[static_cast<std::size_t>(pos)] = e;
      rec(pos + 1, remaining - e);
    }
    mo[static_cast<std::size_t>(pos)] = 0;
  };
  rec(0, max_degree);
  return out;
}

AssembledLp assemble_occupation_lp(const Problem& p, const GridSpec& grid, Membership mode,
                                   double shrink_eps) {
  grid.validate();
  AssembledLp out;
  CellGrids cg = make_grids(p, grid);
  out.monomials = test_monomials(p.n, grid.test_degree);
  const int n_liouville = static_cast<int>(out.monomials.size());
  out.lp.rows = n_liouville + 1;  // + boundary normalization
  out.lp.rhs = Eigen::VectorXd::Zero(out.lp.rows);
  for (const auto& mo : out.monomials) out.lp.row_names.push_back(mono_name(mo));
  out.lp.row_names.push_back("boundary_mass");

  for (int r = 0; r < n_liouville; ++r)
    out.lp.rhs[r] = -mono_value(out.monomials[static_cast<std::size_t>(r)], 0.0, p.x0);
  out.lp.rhs[n_liouville] = 1.0;

  std::vector<double> slots(static_cast<std::size_t>(1 + p.n + p.m));
  Eigen::VectorXd xc(p.n), uc(p.m), fval(p.n);

  // interior cells
  std::vector<int> xi(static_cast<std::size_t>(p.n), 0);
  do {
    for (int i = 0; i < p.n; ++i) xc[i] = cg.x[static_cast<std::size_t>(i)].center(xi[static_cast<std::size_t>(i)]);
    if (!center_feasible(p.omega, xc, mode, shrink_eps)) continue;
    for (int jt = 0; jt < grid.nt; ++jt) {
      double tc = cg.t.center(jt);
      std::vector<int> ui(static_cast<std::size_t>(p.m), 0);
      do {
        for (int i = 0; i < p.m; ++i) uc[i] = cg.u[static_cast<std::size_t>(i)].center(ui[static_cast<std::size_t>(i)]);
        slots[0] = tc;
        for (int i = 0; i < p.n; ++i) slots[static_cast<std::size_t>(1 + i)] = xc[i];
        for (int i = 0; i < p.m; ++i) slots[static_cast<std::size_t>(1 + p.n + i)] = uc[i];
        double lval;
        try {
          for (int i = 0; i < p.n; ++i) fval[i] = p.f_compiled[static_cast<std::size_t>(i)].eval(slots);
          lval = p.lagrangian_compiled.eval(slots);
        } catch (const EvalError&) {
          continue;  // cell center outside f's domain of definition
        }
        SparseLp::Column col;
        col.cost = lval;
        for (int r = 0; r < n_liouville; ++r) {
          double c = mono_liouville(out.monomials[static_cast<std::size_t>(r)], tc, xc, fval);
          if (c != 0) {
            col.idx.push_back(r);
            col.val.push_back(c);
          }
        }
        out.lp.cols.push_back(std::move(col));
        out.mu_t.push_back(tc);
        out.mu_x.push_back(xc);
        out.mu_u.push_back(uc);
      } while (advance(ui, cg.u));
    }
  } while (advance(xi, cg.x));
  out.mu_count = static_cast<int>(out.lp.cols.size());
  if (out.mu_count == 0) throw OccError("inner approximation empty: no feasible interior cells");

  // boundary (target) cells
  std::vector<int> bi(static_cast<std::size_t>(p.n), 0);
  do {
    for (int i = 0; i < p.n; ++i) xc[i] = cg.bx[static_cast<std::size_t>(i)].center(bi[static_cast<std::size_t>(i)]);
    if (p.target.kind == RegionKind::Box && shrink_eps == 0) {
      // project centers onto the box so its faces are representable support
      // points (center-only quantization loses too much on thin targets)
      for (int i = 0; i < p.n; ++i)
        xc[i] = std::clamp(xc[i], p.target.lower[i], p.target.upper[i]);
      if (!p.target.contains(xc, Membership::Closed)) continue;
    } else {
      // terminal measure lives on the closure of the target
      if (!center_feasible(p.target, xc, Membership::Closed, shrink_eps)) continue;
    }
    SparseLp::Column col;
    col.cost = p.terminal_cost_compiled.eval(
        std::span<const double>(xc.data(), static_cast<std::size_t>(xc.size())));
    for (int r = 0; r < n_liouville; ++r) {
      double v = -mono_value(out.monomials[static_cast<std::size_t>(r)], p.T, xc);
      if (v != 0) {
        col.idx.push_back(r);
        col.val.push_back(v);
      }
    }
    col.idx.push_back(n_liouville);
    col.val.push_back(1.0);
    out.lp.cols.push_back(std::move(col));
    out.bd_x.push_back(xc);
  } while (advance(bi, cg.bx));
  out.bd_count = static_cast<int>(out.lp.cols.size()) - out.mu_count;
  if (out.bd_count == 0) throw OccError("inner approximation empty: no feasible target cells");
  return out;
}

DiscreteOccupationMeasure solve_occupation(const Problem& p, const GridSpec& grid,
                                           Membership mode, double shrink_eps) {
  AssembledLp a = assemble_occupation_lp(p, grid, mode, shrink_eps);
  LpSolution sol = solve_lp(a.lp);
  if (sol.status == LpStatus::Infeasible) {
    std::string row = sol.infeasible_row >= 0 &&
                              sol.infeasible_row < static_cast<int>(a.lp.row_names.size())
                          ? a.lp.row_names[static_cast<std::size_t>(sol.infeasible_row)]
                          : "unknown";
    throw OccError("occupation LP infeasible (certificate row: " + row + ")");
  }
  if (sol.status == LpStatus::Unbounded)
    throw OccError("occupation LP unbounded: L or g unbounded below on the box (data error)");
  if (sol.status != LpStatus::Optimal) throw OccError("occupation LP: iteration limit reached");

  DiscreteOccupationMeasure dm;
  dm.objective = sol.objective;
  for (int j = 0; j < a.mu_count; ++j) {
    if (sol.x[j] > 1e-12)
      dm.mu.push_back({a.mu_t[static_cast<std::size_t>(j)], a.mu_x[static_cast<std::size_t>(j)],
                       a.mu_u[static_cast<std::size_t>(j)], sol.x[j]});
  }
  for (int j = 0; j < a.bd_count; ++j) {
    double w = sol.x[a.mu_count + j];
    if (w > 1e-12) dm.boundary.push_back({a.bd_x[static_cast<std::size_t>(j)], w});
  }
  return dm;
}

double DiscreteOccupationMeasure::total_mass() const {
  double s = 0;
  for (const auto& c : mu) s += c.weight;
  return s;
}

double DiscreteOccupationMeasure::boundary_mass() const {
  double s = 0;
  for (const auto& c : boundary) s += c.weight;
  return s;
}

void DiscreteOccupationMeasure::write_csv(std::ostream& os, int n, int m) const {
  os << "t_center";
  for (int i = 1; i <= n; ++i) os << ",x" << i << "_center";
  for (int i = 1; i <= m; ++i) os << ",u" << i << "_center";
  os << ",weight\n";
  for (const auto& c : mu) {
    os << c.t;
    for (int i = 0; i < n; ++i) os << "," << c.x[i];
    for (int i = 0; i < m; ++i) os << "," << c.u[i];
    os << "," << c.weight << "\n";
  }
}

namespace {

DiscreteOccupationMeasure deposit_trajectory(
    const Problem& p, const Trajectory& tr, const GridSpec& grid,
    const std::function<void(double, std::vector<Eigen::VectorXd>&, std::vector<double>&)>&
        atoms_at) {
  CellGrids cg = make_grids(p, grid);
  std::map<std::vector<int>, double> acc;  // (jt, jx.., ju..) -> mass
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;
  for (std::size_t k = 0; k + 1 < tr.times.size(); ++k) {
    double h = tr.times[k + 1] - tr.times[k];
    if (h <= 0) continue;
    double tm = 0.5 * (tr.times[k] + tr.times[k + 1]);
    Eigen::VectorXd xm = 0.5 * (tr.states[k] + tr.states[k + 1]);
    atoms_at(tm, atoms, weights);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (weights[a] == 0) continue;
      std::vector<int> key;
      key.push_back(cg.t.clamp_index(tm));
      for (int i = 0; i < p.n; ++i) key.push_back(cg.x[static_cast<std::size_t>(i)].clamp_index(xm[i]));
      for (int i = 0; i < p.m; ++i)
        key.push_back(cg.u[static_cast<std::size_t>(i)].clamp_index(atoms[a][i]));
      acc[key] += weights[a] * h;
    }
  }
  DiscreteOccupationMeasure dm;
  for (const auto& [key, w] : acc) {
    DiscreteOccupationMeasure::Cell c;
    c.t = cg.t.center(key[0]);
    c.x = Eigen::VectorXd(p.n);
    c.u = Eigen::VectorXd(p.m);
    for (int i = 0; i < p.n; ++i) c.x[i] = cg.x[static_cast<std::size_t>(i)].center(key[static_cast<std::size_t>(1 + i)]);
    for (int i = 0; i < p.m; ++i)
      c.u[i] = cg.u[static_cast<std::size_t>(i)].center(key[static_cast<std::size_t>(1 + p.n + i)]);
    c.weight = w;
    dm.mu.push_back(std::move(c));
  }
  // terminal Dirac at the endpoint's target-grid cell
  DiscreteOccupationMeasure::BoundaryCell bc;
  bc.x = Eigen::VectorXd(p.n);
  for (int i = 0; i < p.n; ++i)
    bc.x[i] = cg.bx[static_cast<std::size_t>(i)].center(
        cg.bx[static_cast<std::size_t>(i)].clamp_index(tr.final_state()[i]));
  bc.weight = 1.0;
  dm.boundary.push_back(std::move(bc));
  return dm;
}

}  // namespace

DiscreteOccupationMeasure trajectory_measure(const Problem& p, const Trajectory& tr,
                                             const ClassicalControl& c, const GridSpec& grid) {
  return deposit_trajectory(p, tr, grid,
                            [&](double t, std::vector<Eigen::VectorXd>& atoms,
                                std::vector<double>& w) {
                              atoms.assign(1, c.value_at(t));
                              w.assign(1, 1.0);
                            });
}

DiscreteOccupationMeasure trajectory_measure(const Problem& p, const Trajectory& tr,
                                             const YoungMeasureControl& y, const GridSpec& grid) {
  return deposit_trajectory(p, tr, grid,
                            [&](double t, std::vector<Eigen::VectorXd>& atoms,
                                std::vector<double>& w) {
                              auto it = std::upper_bound(y.time_grid.begin(), y.time_grid.end(), t);
                              std::size_t k = it == y.time_grid.begin()
                                                  ? 0
                                                  : static_cast<std::size_t>(it - y.time_grid.begin()) - 1;
                              if (k >= y.weights.size()) k = y.weights.size() - 1;
                              atoms = y.atoms;
                              w = y.weights[k];
                            });
}

double liouville_residual(const Problem& p, const DiscreteOccupationMeasure& dm,
                          int test_degree) {
  auto monomials = test_monomials(p.n, test_degree);
  std::vector<double> slots(static_cast<std::size_t>(1 + p.n + p.m));
  Eigen::VectorXd fval(p.n);
  double worst = 0;
  for (const auto& mo : monomials) {
    double r = mono_value(mo, 0.0, p.x0);
    double scale = std::abs(r);
    for (const auto& c : dm.mu) {
      slots[0] = c.t;
      for (int i = 0; i < p.n; ++i) slots[static_cast<std::size_t>(1 + i)] = c.x[i];
      for (int i = 0; i < p.m; ++i) slots[static_cast<std::size_t>(1 + p.n + i)] = c.u[i];
      for (int i = 0; i < p.n; ++i) fval[i] = p.f_compiled[static_cast<std::size_t>(i)].eval(slots);
      double coeff = mono_liouville(mo, c.t, c.x, fval);
      r += coeff * c.weight;
      scale = std::max(scale, std::abs(coeff));
    }
    for (const auto& b : dm.boundary) {
      double v = mono_value(mo, p.T, b.x);
      r -= v * b.weight;
      scale = std::max(scale, std::abs(v));
    }
    if (scale < 1e-12) scale = 1;
    worst = std::max(worst, std::abs(r) / scale);
  }
  return worst;
}

}  // namespace relaxgap
