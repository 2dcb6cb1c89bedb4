#include "relaxgap/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaxgap/dynamics.hpp"
#include "relaxgap/rng.hpp"

namespace relaxgap {

namespace {

std::vector<double> to_point(double t, const Eigen::VectorXd& x) {
  std::vector<double> pt;
  pt.push_back(t);
  for (int i = 0; i < x.size(); ++i) pt.push_back(x[i]);
  return pt;
}

std::vector<double> to_point(const Eigen::VectorXd& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

// dense tensor grid over the control box
std::vector<Eigen::VectorXd> control_grid(const Problem& p, int points_per_dim) {
  std::vector<Eigen::VectorXd> grid;
  std::vector<int> idx(static_cast<std::size_t>(p.m), 0);
  for (;;) {
    Eigen::VectorXd u(p.m);
    for (int i = 0; i < p.m; ++i) {
      double a = p.controls.lower[i], b = p.controls.upper[i];
      u[i] = points_per_dim == 1 ? 0.5 * (a + b)
                                 : a + (b - a) * idx[static_cast<std::size_t>(i)] /
                                           (points_per_dim - 1);
    }
    grid.push_back(std::move(u));
    std::size_t d = 0;
    for (; d < idx.size(); ++d) {
      if (++idx[d] < points_per_dim) break;
      idx[d] = 0;
    }
    if (d == idx.size()) break;
  }
  return grid;
}

// evaluator of (f, L) with reusable slot buffer
struct Lift {
  const Problem* p;
  mutable std::vector<double> slots;

  explicit Lift(const Problem& prob)
      : p(&prob), slots(static_cast<std::size_t>(1 + prob.n + prob.m)) {}

  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& u) const {
    slots[0] = t;
    for (int i = 0; i < p->n; ++i) slots[static_cast<std::size_t>(1 + i)] = x[i];
    for (int i = 0; i < p->m; ++i) slots[static_cast<std::size_t>(1 + p->n + i)] = u[i];
    Eigen::VectorXd out(p->n + 1);
    for (int i = 0; i < p->n; ++i)
      out[i] = p->f_compiled[static_cast<std::size_t>(i)].eval(slots);
    out[p->n] = p->lagrangian_compiled.eval(slots);
    return out;
  }
};

// Hausdorff distance between the images F(t,x), F(t,y) matched over a shared
// control grid.  Upper-bounds the true distance for a common parametrization.
double matched_hausdorff(const Lift& F, double tx, const Eigen::VectorXd& x, double ty,
                         const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& ugrid) {
  double worst = 0;
  for (const auto& u : ugrid) worst = std::max(worst, (F(tx, x, u) - F(ty, y, u)).norm());
  return worst;
}

Eigen::VectorXd random_box_point(Rng& rng, const BoxSpec& box) {
  Eigen::VectorXd x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lower[i], box.upper[i]);
  return x;
}

// Deterministic probe points: per-dimension sweeps through the box center
// hit axis zeros (e.g. a 1/x singularity) that random samples miss.
std::vector<Eigen::VectorXd> axis_sweep_points(const BoxSpec& box, int per_dim) {
  std::vector<Eigen::VectorXd> pts;
  Eigen::VectorXd center = 0.5 * (box.lower + box.upper);
  pts.push_back(center);
  for (int d = 0; d < box.dim(); ++d) {
    for (int k = 0; k < per_dim; ++k) {
      Eigen::VectorXd x = center;
      x[d] = box.lower[d] + (box.upper[d] - box.lower[d]) * k / (per_dim - 1);
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

}  // namespace

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::FW1: return "FW1";
    case ConditionId::FW2: return "FW2";
    case ConditionId::H1: return "H1";
    case ConditionId::IPC: return "H2";
    case ConditionId::V4: return "V4";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SatisfiedOnSamples: return "satisfied-on-samples";
    case Verdict::Violated: return "violated";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

// ---------------------------------------------------------------------------

ConditionReport check_fw1(const Problem& p, long samples, std::uint64_t seed) {
  ConditionReport rep;
  rep.condition = ConditionId::FW1;
  rep.seed = seed;
  Rng rng(seed, 1);
  Lift F(p);

  double lambda_hat = 0;
  std::vector<Eigen::VectorXd> sweeps = axis_sweep_points(p.omega.bounding_box, 21);
  auto usweeps = axis_sweep_points(p.controls, 9);

  auto probe = [&](double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u) -> bool {
    try {
      Eigen::VectorXd v = F(t, x, u);
      if (!v.allFinite()) throw EvalError("nonfinite value", "f or L");
      lambda_hat = std::max(lambda_hat, v.norm() / (1.0 + x.norm()));
      ++rep.samples_used;
      return true;
    } catch (const EvalError& e) {
      Witness w;
      w.description = std::string("f or L fails to evaluate finitely: ") + e.what();
      w.point = to_point(t, x);
      rep.witnesses.push_back(std::move(w));
      return false;
    }
  };

  bool ok = true;
  for (const auto& x : sweeps)
    for (const auto& u : usweeps) ok = probe(0.5 * p.T, x, u) && ok;
  for (long s = 0; s < samples && ok; ++s) {
    double t = rng.uniform(0, p.T);
    Eigen::VectorXd x = random_box_point(rng, p.omega.bounding_box);
    Eigen::VectorXd u = random_box_point(rng, p.controls);
    ok = probe(t, x, u);
  }
  // a huge finite estimate still signals an unbounded field on the box
  if (ok && lambda_hat > 1e8) {
    Witness w;
    w.description = "velocity bound estimate diverges on the box";
    w.value = lambda_hat;
    rep.witnesses.push_back(std::move(w));
    ok = false;
  }
  rep.constants["lambda_hat"] = lambda_hat;
  rep.verdict = ok ? Verdict::SatisfiedOnSamples : Verdict::Violated;
  if (ok)
    rep.notes.push_back(
        "on a compact box every finite field satisfies the bound; lambda_hat is the "
        "observed constant");
  return rep;
}

ConditionReport check_fw2(const Problem& p, long samples, std::uint64_t seed) {
  ConditionReport rep;
  rep.condition = ConditionId::FW2;
  rep.seed = seed;
  Rng rng(seed, 2);
  Lift F(p);
  auto ugrid = control_grid(p, std::min(kDefaultControlGridPoints, 21));

  // pair separations: the reported constant uses the contract range
  // [1e-4, 1e-1]; two finer diagnostic scales probe for divergence
  const std::vector<double> scales = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> max_ratio(scales.size(), 0.0);
  std::vector<Witness> worst(scales.size());

  auto base_points = axis_sweep_points(p.omega.bounding_box, 21);
  long randoms = std::max<long>(8, samples / static_cast<long>(scales.size()));

  for (std::size_t si = 0; si < scales.size(); ++si) {
    double d = scales[si];
    auto probe_pair = [&](double t, const Eigen::VectorXd& x) {
      Eigen::VectorXd dir(p.n);
      for (int i = 0; i < p.n; ++i) dir[i] = rng.uniform(-1, 1);
      if (dir.norm() < 1e-12) dir.setOnes();
      dir.normalize();
      Eigen::VectorXd y = x + d * dir;
      for (int i = 0; i < p.n; ++i)
        y[i] = std::clamp(y[i], p.omega.bounding_box.lower[i], p.omega.bounding_box.upper[i]);
      double sep = (y - x).norm();
      if (sep < d * 1e-3) return;
      try {
        double dist = matched_hausdorff(F, t, x, t, y, ugrid);
        double ratio = dist / sep;
        ++rep.samples_used;
        if (ratio > max_ratio[si]) {
          max_ratio[si] = ratio;
          worst[si].description = "pair (x, y) with largest difference ratio at scale " +
                                  std::to_string(d);
          worst[si].point = to_point(t, x);
          worst[si].value = ratio;
        }
      } catch (const EvalError&) {
        // singular pairs are FW1's business; skip here
      }
    };
    for (const auto& x : base_points) probe_pair(0.5 * p.T, x);
    for (long s = 0; s < randoms; ++s)
      probe_pair(rng.uniform(0, p.T), random_box_point(rng, p.omega.bounding_box));
  }

  double k_hat = 0;
  for (std::size_t si = 0; si < 4; ++si) k_hat = std::max(k_hat, max_ratio[si]);
  rep.constants["k_R_hat"] = k_hat;
  rep.constants["ratio_at_coarsest"] = max_ratio.front();
  rep.constants["ratio_at_finest"] = max_ratio.back();

  bool diverging = max_ratio.back() > 100.0 * std::max(max_ratio.front(), 1e-12);
  if (diverging) {
    rep.witnesses.push_back(worst.back());
    rep.verdict = Verdict::Violated;
  } else {
    rep.verdict = Verdict::SatisfiedOnSamples;
  }
  return rep;
}

ConditionReport check_h1(const Problem& p, long probes, std::uint64_t seed) {
  ConditionReport rep;
  rep.condition = ConditionId::H1;
  rep.seed = seed;
  if (p.autonomous()) {
    rep.verdict = Verdict::SatisfiedOnSamples;
    rep.constants["K_hat"] = 0;
    rep.notes.push_back("autonomous field: time-regularity holds with constant 0");
    return rep;
  }
  Rng rng(seed, 3);
  Lift F(p);
  auto ugrid = control_grid(p, std::min(kDefaultControlGridPoints, 21));

  const std::vector<double> ds = {p.T / 8, p.T / 16, p.T / 32};
  std::vector<double> k_hat(ds.size(), 0.0);
  const int waypoints = 9;
  const int quad = 96;

  for (long pr = 0; pr < probes; ++pr) {
    // piecewise-linear probe curve through random waypoints in the box
    std::vector<Eigen::VectorXd> wp;
    for (int wpt = 0; wpt < waypoints; ++wpt)
      wp.push_back(random_box_point(rng, p.omega.bounding_box));
    auto curve = [&](double t) -> Eigen::VectorXd {
      double s = std::clamp(t / p.T, 0.0, 1.0) * (waypoints - 1);
      int k = std::min(static_cast<int>(s), waypoints - 2);
      double a = s - k;
      return (1 - a) * wp[static_cast<std::size_t>(k)] + a * wp[static_cast<std::size_t>(k) + 1];
    };
    for (std::size_t di = 0; di < ds.size(); ++di) {
      double d = ds[di];
      double integral = 0;
      double hstep = (p.T - d) / quad;
      for (int q = 0; q <= quad; ++q) {
        double s = q * hstep;
        Eigen::VectorXd xs = curve(s);
        double val = matched_hausdorff(F, s, xs, s + d, xs, ugrid);
        integral += val * hstep * ((q == 0 || q == quad) ? 0.5 : 1.0);
      }
      k_hat[di] = std::max(k_hat[di], integral / d);
      ++rep.samples_used;
    }
  }
  rep.constants["K_hat"] = *std::max_element(k_hat.begin(), k_hat.end());
  for (std::size_t di = 0; di < ds.size(); ++di)
    rep.constants["K_hat_d" + std::to_string(di)] = k_hat[di];

  bool stable = true;
  for (std::size_t di = 1; di < ds.size(); ++di) {
    double prev = k_hat[di - 1], cur = k_hat[di];
    if (cur > 2.0 * std::max(prev, 1e-12)) stable = false;
  }
  if (stable) {
    rep.verdict = Verdict::SatisfiedOnSamples;
  } else {
    rep.verdict = Verdict::Violated;
    Witness w;
    w.description = "distance integral does not scale linearly in the time shift";
    w.value = k_hat.back();
    rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

ConditionReport check_ipc(const Problem& p, long boundary_samples, double eta,
                          std::uint64_t seed) {
  ConditionReport rep;
  rep.condition = ConditionId::IPC;
  rep.seed = seed;
  rep.constants["eta"] = eta;

  const bool box_domain = p.omega.kind == RegionKind::Box;
  Gradient gh;
  if (!box_domain) {
    gh = gradient(p.omega.h, p.x_names);
    for (bool fb : gh.fallback)
      if (fb) {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("h is not differentiable (symbolic gradient unavailable)");
        return rep;
      }
  }
  bool f_autonomous = true;
  for (const auto& fe : p.f)
    if (depends_on(fe, "t")) f_autonomous = false;
  if (!f_autonomous)
    rep.notes.push_back(
        "f depends on t: the Clarke-cone simplification assumes an autonomous field; "
        "result below is a time-sampled heuristic");

  Rng rng(seed, 4);
  const BoxSpec& box = p.omega.bounding_box;
  double diameter = (box.upper - box.lower).norm();

  // boundary points with their outward-pointing level-set normals.  Implicit
  // domains: march from an interior sample along a random ray until h changes
  // sign, then bisect; grad h is the inward normal direction.  Box domains:
  // sample face interiors and use the face normal (corners have probability
  // zero under uniform face sampling).
  std::vector<Eigen::VectorXd> boundary;
  std::vector<Eigen::VectorXd> normals;  // inward, unnormalized
  long attempts = 0;
  while (static_cast<long>(boundary.size()) < boundary_samples &&
         attempts < boundary_samples * 60) {
    ++attempts;
    if (box_domain) {
      int face_dim = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(p.n)));
      bool upper_face = rng.uniform() < 0.5;
      Eigen::VectorXd pt(p.n);
      for (int i = 0; i < p.n; ++i) pt[i] = rng.uniform(p.omega.lower[i], p.omega.upper[i]);
      pt[face_dim] = upper_face ? p.omega.upper[face_dim] : p.omega.lower[face_dim];
      Eigen::VectorXd nrm = Eigen::VectorXd::Zero(p.n);
      nrm[face_dim] = upper_face ? -1.0 : 1.0;
      boundary.push_back(std::move(pt));
      normals.push_back(std::move(nrm));
      continue;
    }
    Eigen::VectorXd a = random_box_point(rng, box);
    if (!(p.omega.h_value(a) > 0)) continue;
    Eigen::VectorXd dir(p.n);
    for (int i = 0; i < p.n; ++i) dir[i] = rng.uniform(-1, 1);
    if (dir.norm() < 1e-12) continue;
    dir.normalize();
    double lo = 0, hi = -1;
    for (double step = diameter / 64; step <= diameter; step += diameter / 64) {
      Eigen::VectorXd c = a + step * dir;
      if (!box.contains(c, Membership::Closed)) break;
      double h = p.omega.h_value(c);
      if (h <= 0) {
        hi = step;
        break;
      }
      lo = step;
    }
    if (hi < 0) continue;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (p.omega.h_value(a + mid * dir) > 0)
        lo = mid;
      else
        hi = mid;
    }
    Eigen::VectorXd x0 = a + 0.5 * (lo + hi) * dir;
    Bindings xb0;
    for (int i = 0; i < p.n; ++i) xb0[p.x_names[static_cast<std::size_t>(i)]] = x0[i];
    Eigen::VectorXd grad_h(p.n);
    for (int i = 0; i < p.n; ++i)
      grad_h[i] = eval(gh.partials[static_cast<std::size_t>(i)], xb0);
    if (grad_h.norm() < 1e-12) continue;  // degenerate level-set point
    boundary.push_back(std::move(x0));
    normals.push_back(std::move(grad_h));
  }
  if (boundary.empty()) {
    rep.verdict = Verdict::NotApplicable;
    rep.notes.push_back("no boundary point of {h = 0} found inside the bounding box");
    return rep;
  }
  rep.samples_used = static_cast<long>(boundary.size());

  auto ugrid = control_grid(p, kDefaultControlGridPoints);
  std::vector<double> slots(static_cast<std::size_t>(1 + p.n + p.m));
  double eta_hat = std::numeric_limits<double>::infinity();
  long violations = 0;

  std::vector<double> t_samples = f_autonomous ? std::vector<double>{0.0}
                                               : std::vector<double>{0.0, 0.5 * p.T, p.T};
  for (std::size_t bi = 0; bi < boundary.size(); ++bi) {
    const Eigen::VectorXd& x0 = boundary[bi];
    const Eigen::VectorXd& grad_h = normals[bi];
    double gn = grad_h.norm();
    // margin is normalized by ||grad h||, so rescaling h leaves it unchanged
    double margin = -std::numeric_limits<double>::infinity();
    for (double t : t_samples) {
      for (const auto& u : ugrid) {
        slots[0] = t;
        for (int i = 0; i < p.n; ++i) slots[static_cast<std::size_t>(1 + i)] = x0[i];
        for (int i = 0; i < p.m; ++i) slots[static_cast<std::size_t>(1 + p.n + i)] = u[i];
        double dot = 0;
        for (int i = 0; i < p.n; ++i)
          dot += p.f_compiled[static_cast<std::size_t>(i)].eval(slots) * grad_h[i];
        margin = std::max(margin, dot / gn);
      }
      if (!f_autonomous && margin < eta) break;  // heuristic: all t must pass
    }
    eta_hat = std::min(eta_hat, margin);
    if (!(margin >= eta)) {
      ++violations;
      if (rep.witnesses.size() < 16) {
        Witness w;
        w.description = "no admissible inward velocity with the required margin";
        w.point = to_point(x0);
        w.value = margin;
        rep.witnesses.push_back(std::move(w));
      }
    }
  }
  rep.constants["eta_hat"] = eta_hat;
  rep.constants["violation_count"] = static_cast<double>(violations);
  if (!f_autonomous)
    rep.verdict = Verdict::NotApplicable;
  else
    rep.verdict = violations == 0 ? Verdict::SatisfiedOnSamples : Verdict::Violated;
  return rep;
}

ConditionReport check_v4_convexity(const Problem& p, long probes, std::uint64_t seed) {
  ConditionReport rep;
  rep.condition = ConditionId::V4;
  rep.seed = seed;
  Rng rng(seed, 5);
  Lift F(p);

  int upts = p.m == 1 ? kDefaultControlGridPoints : 33;
  auto ugrid = control_grid(p, upts);
  int bins_per_dim = p.n == 1 ? 64 : 12;

  long convex_sets = 0, sampled_points = 0;
  bool violated = false;

  for (long pr = 0; pr < probes && !violated; ++pr) {
    double t = rng.uniform(0, p.T);
    Eigen::VectorXd x = random_box_point(rng, p.omega.bounding_box);
    ++sampled_points;

    // achievable velocities and their cheapest cost (reduced Lagrangian on
    // a velocity grid)
    std::vector<Eigen::VectorXd> vs;
    std::vector<double> ls;
    for (const auto& u : ugrid) {
      try {
        Eigen::VectorXd fl = F(t, x, u);
        vs.push_back(fl.head(p.n));
        ls.push_back(fl[p.n]);
      } catch (const EvalError&) {
      }
    }
    if (vs.size() < 3) continue;

    Eigen::VectorXd vmin = vs[0], vmax = vs[0];
    for (const auto& v : vs) {
      vmin = vmin.cwiseMin(v);
      vmax = vmax.cwiseMax(v);
    }
    double range = (vmax - vmin).norm();
    if (range < 1e-12) {
      ++convex_sets;  // single achievable velocity: trivially convex
      continue;
    }

    auto bin_of = [&](const Eigen::VectorXd& v) {
      long flat = 0;
      for (int i = 0; i < p.n; ++i) {
        double w = (vmax[i] - vmin[i]);
        int b = w < 1e-15 ? 0
                          : std::min(bins_per_dim - 1,
                                     static_cast<int>((v[i] - vmin[i]) / w * bins_per_dim));
        flat = flat * bins_per_dim + b;
      }
      return flat;
    };
    std::map<long, double> lbar;        // bin -> min L
    std::map<long, Eigen::VectorXd> vc; // bin -> representative velocity
    for (std::size_t k = 0; k < vs.size(); ++k) {
      long b = bin_of(vs[k]);
      auto it = lbar.find(b);
      if (it == lbar.end() || ls[k] < it->second) {
        lbar[b] = ls[k];
        vc[b] = vs[k];
      }
    }

    // V3 probe: for n = 1, are the occupied bins contiguous?
    if (p.n == 1) {
      std::vector<long> keys;
      for (const auto& [b, _] : lbar) keys.push_back(b);
      bool contiguous = keys.back() - keys.front() + 1 == static_cast<long>(keys.size());
      if (contiguous) ++convex_sets;
    }

    // binning tolerance: the per-bin min can sit anywhere inside the bin
    double binwidth = (vmax - vmin).norm() / bins_per_dim;
    double slope_est = 0;
    {
      const Eigen::VectorXd* prev_v = nullptr;
      double prev_l = 0;
      for (const auto& [b, l] : lbar) {
        if (prev_v) {
          double dv = (vc[b] - *prev_v).norm();
          if (dv > 1e-12) slope_est = std::max(slope_est, std::abs(l - prev_l) / dv);
        }
        prev_v = &vc[b];
        prev_l = l;
      }
    }
    double tol = 1e-9 + 4.0 * slope_est * binwidth;

    // midpoint convexity over random occupied-bin pairs
    std::vector<long> occupied;
    for (const auto& [b, _] : lbar) occupied.push_back(b);
    long pairs = std::min<long>(400, static_cast<long>(occupied.size() * occupied.size()));
    for (long q = 0; q < pairs; ++q) {
      long b1 = occupied[rng.uniform_index(occupied.size())];
      long b2 = occupied[rng.uniform_index(occupied.size())];
      if (b1 == b2) continue;
      Eigen::VectorXd vm = 0.5 * (vc[b1] + vc[b2]);
      long bm = bin_of(vm);
      auto it = lbar.find(bm);
      if (it == lbar.end()) continue;  // midpoint falls outside the achievable set
      double lhs = it->second;
      double rhs = 0.5 * (lbar[b1] + lbar[b2]);
      if (lhs > rhs + tol) {
        // re-verify with a locally refined control search before reporting
        auto refine = [&](const Eigen::VectorXd& target) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& u : ugrid) {
            Eigen::VectorXd fl = F(t, x, u);
            if ((fl.head(p.n) - target).norm() <= binwidth) best = std::min(best, fl[p.n]);
          }
          return best;
        };
        double l1 = refine(vc[b1]), l2 = refine(vc[b2]), lm = refine(vm);
        if (std::isfinite(lm) && lm > 0.5 * (l1 + l2) + tol) {
          violated = true;
          Witness w;
          w.description = "midpoint convexity of the reduced Lagrangian fails";
          w.point = to_point(t, x);
          for (int i = 0; i < p.n; ++i) w.point.push_back(vc[b1][i]);
          for (int i = 0; i < p.n; ++i) w.point.push_back(vc[b2][i]);
          w.value = lm - 0.5 * (l1 + l2);
          rep.witnesses.push_back(std::move(w));
          break;
        }
      }
    }
  }

  rep.samples_used = sampled_points;
  rep.constants["convex_velocity_set_fraction"] =
      sampled_points > 0 ? static_cast<double>(convex_sets) / sampled_points : 0;
  rep.verdict = violated ? Verdict::Violated : Verdict::SatisfiedOnSamples;

  // companion static facts (V1, V2, V5)
  rep.notes.push_back("V2: state/target/control sets are compact (bounding boxes supplied)");
  rep.notes.push_back("V1: L and g evaluated finitely on all samples (continuity not proven)");
  {
    // V5: look for one admissible constant control with finite cost
    bool found = false;
    for (const auto& u : control_grid(p, 5)) {
      try {
        ClassicalControl c = ClassicalControl::constant(u, p.T);
        Trajectory tr = integrate_classical(p, c, p.T / 100);
        double v = total_cost(p, tr);
        if (std::isfinite(v) && p.target.violation(tr.final_state()) < 1e-9 &&
            p.omega.violation(tr.final_state()) < 1e-9) {
          found = true;
          break;
        }
      } catch (...) {
      }
    }
    rep.notes.push_back(found
                            ? "V5: an admissible trajectory with finite cost exists "
                              "(constant-control witness)"
                            : "V5: no constant-control witness found; run solve-classical");
  }
  return rep;
}

}  // namespace relaxgap
