#include "lipmod/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipmod {

Polyhedron sublevel_polyhedron(const ConvexFunction& f) {
  if (!f.is_max_affine())
    throw InputError("sublevel_polyhedron: only max-affine functions are polyhedral");
  const auto& ma = f.as_max_affine();
  Polyhedron P;
  P.n = f.dim();
  P.rows.reserve(ma.c.size());
  for (std::size_t j = 0; j < ma.c.size(); ++j) P.rows.push_back({ma.c[j], -ma.d[j]});
  return P;
}

PointCloud linearize_on_box(const ConvexFunction& f, const BoxRegion& region,
                            int grid_per_axis, const ToleranceConfig& tol) {
  if (f.dim() != region.dim()) throw DimensionError("linearize: dimension mismatch");
  if (grid_per_axis < 2) throw InputError("linearize: empty grid");
  const std::size_t total = region.grid_size(grid_per_axis);
  std::vector<Vec> rows;

  if (f.is_max_affine()) {
    // A piece active at z contributes exactly (c_j, -d_j): emit that
    // algebraic form instead of re-deriving it through a'z - f(z).
    const auto& ma = f.as_max_affine();
    std::vector<char> seen(ma.c.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
      const Vec z = region.grid_point(i, grid_per_axis);
      double fmax = -std::numeric_limits<double>::infinity();
      Vec vals(ma.c.size());
      for (std::size_t j = 0; j < ma.c.size(); ++j) {
        vals[j] = dot(ma.c[j], z) + ma.d[j];
        fmax = std::max(fmax, vals[j]);
      }
      for (std::size_t j = 0; j < ma.c.size(); ++j)
        if (fmax - vals[j] <= tol.active_tol) seen[j] = 1;
    }
    for (std::size_t j = 0; j < ma.c.size(); ++j) {
      if (!seen[j]) continue;
      Vec row = ma.c[j];
      row.push_back(-ma.d[j]);
      rows.push_back(std::move(row));
    }
  } else {
    for (std::size_t i = 0; i < total; ++i) {
      const Vec z = region.grid_point(i, grid_per_axis);
      const double fz = f.value(z);
      const PointCloud gens = subdiff_generators(f, z, tol);
      for (const auto& a : gens.points) {
        Vec row = a;
        row.push_back(dot(a, z) - fz);
        rows.push_back(std::move(row));
      }
    }
  }
  return PointCloud(f.dim() + 1, std::move(rows));
}

namespace {

// Minimizer and minimum of a PSD quadratic; by convention the quadratic is
// x'Qx/2 + q'x + r with Q positive definite for a bounded sublevel set.
struct QuadraticShape {
  Vec xstar;
  double fmin;
};

QuadraticShape quadratic_shape(const ConvexFunction& f) {
  const auto& qd = f.as_quadratic();
  Vec rhs = qd.q;
  for (double& v : rhs) v = -v;
  Vec xstar;
  if (!solve_dense(qd.Q, rhs, xstar))
    throw InputError("quadratic sublevel set: Q singular, set unbounded or degenerate");
  return {xstar, f.value(xstar)};
}

}  // namespace

BoxRegion sublevel_bounding_box(const ConvexFunction& f, const ToleranceConfig& tol) {
  const int n = f.dim();
  if (f.is_max_affine()) {
    const Polyhedron P = sublevel_polyhedron(f);
    if (!polyhedron_feasible(P, tol))
      throw InfeasibleError("sublevel set: empty");
    Vec lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
      Vec obj(n, 0.0);
      obj[j] = 1.0;
      const LpResult up = solve_lp(obj, LpSense::maximize, P, std::nullopt, tol);
      const LpResult dn = solve_lp(obj, LpSense::minimize, P, std::nullopt, tol);
      if (up.status != LpStatus::optimal || dn.status != LpStatus::optimal)
        throw InputError("sublevel set: unbounded");
      hi[j] = up.value;
      lo[j] = dn.value;
    }
    Vec center(n), hw(n);
    for (int j = 0; j < n; ++j) {
      center[j] = 0.5 * (lo[j] + hi[j]);
      hw[j] = std::max(0.5 * (hi[j] - lo[j]), 1e-12);
    }
    return BoxRegion(std::move(center), std::move(hw));
  }
  if (f.is_quadratic()) {
    const QuadraticShape shape = quadratic_shape(f);
    if (shape.fmin > tol.feas_tol) throw InfeasibleError("sublevel set: empty");
    const auto& qd = f.as_quadratic();
    Vec hw(n);
    for (int j = 0; j < n; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      Vec qinv_e;
      if (!solve_dense(qd.Q, e, qinv_e))
        throw InputError("quadratic sublevel set: Q singular, set unbounded");
      const double extent2 = 2.0 * std::max(0.0, -shape.fmin) * qinv_e[j];
      if (!(extent2 >= 0.0))
        throw InputError("quadratic sublevel set: unbounded direction");
      hw[j] = std::max(std::sqrt(extent2), 1e-12);
    }
    return BoxRegion(shape.xstar, std::move(hw));
  }
  throw InputError("sublevel_bounding_box: sums are not supported as instance nominals");
}

void validate_instance(const ConvexInstance& inst, const ToleranceConfig& tol) {
  if (static_cast<int>(inst.x0.size()) != inst.f0.dim())
    throw DimensionError("instance: x0 dimension mismatch");
  if (!(inst.alpha0 > 0.0) || !(inst.alpha > 0.0))
    throw InputError("instance: enlargement radii must be positive");
  if (inst.grid_per_axis < 2) throw InputError("instance: grid_per_axis must be >= 2");

  // An empty or unbounded sublevel set invalidates the instance before the
  // nominal point is even considered.
  const BoxRegion box = enlargement_box(inst, inst.alpha, tol);
  if (inst.f0.value(inst.x0) > tol.feas_tol)
    throw PreconditionError("instance: x0 violates f0(x0) <= 0");

  // Coercivity certificate: f0 strictly positive on the boundary of the
  // sampling box, so the sublevel set cannot escape it.
  const int n = box.dim();
  const int g = std::max(inst.grid_per_axis, 3);
  double boundary_min = std::numeric_limits<double>::infinity();
  const std::size_t total = box.grid_size(g);
  for (std::size_t i = 0; i < total; ++i) {
    bool on_boundary = false;
    std::size_t rest = i;
    for (int j = 0; j < n; ++j) {
      const int idx = static_cast<int>(rest % g);
      rest /= static_cast<std::size_t>(g);
      if (idx == 0 || idx == g - 1) on_boundary = true;
    }
    if (!on_boundary) continue;
    boundary_min = std::min(boundary_min, inst.f0.value(box.grid_point(i, g)));
  }
  if (!(boundary_min > 0.0))
    throw PreconditionError("instance: f0 not positive on the sampling box boundary");
}

BoxRegion enlargement_box(const ConvexInstance& inst, double extra, const ToleranceConfig& tol) {
  return sublevel_bounding_box(inst.f0, tol).inflated(inst.alpha0 + extra);
}

Kappa0Result compute_kappa0(const ConvexInstance& inst, const ToleranceConfig& tol) {
  validate_instance(inst, tol);
  const BoxRegion region = enlargement_box(inst, 0.0, tol);
  PointCloud rows = linearize_on_box(inst.f0, region, inst.grid_per_axis, tol);
  LinearSystem sys(inst.f0.dim(), std::move(rows), NormSpec{Norm::l2});

  // f0(x0) <= 0 makes x0 feasible for every linearization row; anything
  // beyond feas_tol signals an inconsistent sampling of the instance.
  double viol = 0.0;
  for (std::size_t i = 0; i < sys.row_count(); ++i)
    viol = std::max(viol, dot(sys.gradient(i), inst.x0) - sys.offset(i));
  if (viol > tol.feas_tol)
    throw PreconditionError("kappa0: x0 infeasible for the sampled linearization");

  ModulusReport report = lipschitz_modulus(sys, inst.x0, tol);
  return {report.modulus, std::move(sys), std::move(report), region};
}

SlaterResult slater_margin(const ConvexFunction& f0, const BoxRegion& search_box,
                           int grid_per_axis) {
  if (f0.dim() != search_box.dim()) throw DimensionError("slater_margin: dimension mismatch");
  const std::size_t total = search_box.grid_size(grid_per_axis);
  SlaterResult res;
  res.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    const Vec z = search_box.grid_point(i, grid_per_axis);
    const double v = f0.value(z);
    if (v < res.margin) {
      res.margin = v;
      res.witness = z;
    }
  }
  return res;
}

namespace {

// Boundary samples of (sublevel set) + r * (Euclidean ball) in dimension <= 2.
std::vector<Vec> offset_boundary_samples(const ConvexFunction& f, double r,
                                         const ToleranceConfig& tol, int samples) {
  const int n = f.dim();
  if (n == 1) {
    if (f.is_max_affine()) {
      const std::vector<Vec> verts = polyhedron_vertices(sublevel_polyhedron(f), tol);
      if (verts.size() < 2) throw PreconditionError("safe_radius: degenerate sublevel set");
      double lo = verts[0][0], hi = verts[0][0];
      for (const auto& v : verts) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      return {{lo - r}, {hi + r}};
    }
    const QuadraticShape shape = quadratic_shape(f);
    if (shape.fmin > tol.feas_tol) throw InfeasibleError("safe_radius: empty sublevel set");
    const double w = std::sqrt(2.0 * std::max(0.0, -shape.fmin) / f.as_quadratic().Q[0][0]);
    return {{shape.xstar[0] - w - r}, {shape.xstar[0] + w + r}};
  }
  if (n != 2) throw DimensionError("safe_radius: boundary sampling supports n <= 2");

  std::vector<Vec> out;
  if (f.is_max_affine()) {
    // Convex polygon offset: edges shifted along outward normals plus the
    // circular arcs spanned at the vertices.
    const Polyhedron P = sublevel_polyhedron(f);
    std::vector<Vec> verts = polyhedron_vertices(P, tol);
    if (verts.size() < 3) throw PreconditionError("safe_radius: degenerate sublevel set");
    Vec c(2, 0.0);
    for (const auto& v : verts) {
      c[0] += v[0];
      c[1] += v[1];
    }
    c[0] /= static_cast<double>(verts.size());
    c[1] /= static_cast<double>(verts.size());
    std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
      return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
    });
    const std::size_t k = verts.size();
    const int per_edge = std::max(samples / static_cast<int>(k), 8);
    for (std::size_t i = 0; i < k; ++i) {
      const Vec& v0 = verts[i];
      const Vec& v1 = verts[(i + 1) % k];
      const double ex = v1[0] - v0[0], ey = v1[1] - v0[1];
      const double len = std::hypot(ex, ey);
      if (len < 1e-12) continue;
      const double nx = ey / len, ny = -ex / len;  // outward for ccw order
      for (int s = 0; s <= per_edge; ++s) {
        const double t = static_cast<double>(s) / per_edge;
        out.push_back({v0[0] + t * ex + r * nx, v0[1] + t * ey + r * ny});
      }
      // Arc around v1 between this edge normal and the next one.
      const Vec& v2 = verts[(i + 2) % k];
      const double fx = v2[0] - v1[0], fy = v2[1] - v1[1];
      const double flen = std::hypot(fx, fy);
      if (flen < 1e-12) continue;
      const double mx = fy / flen, my = -fx / flen;
      double a0 = std::atan2(ny, nx);
      double a1 = std::atan2(my, mx);
      while (a1 < a0) a1 += 2.0 * 3.14159265358979323846;
      for (int s = 0; s <= per_edge; ++s) {
        const double ang = a0 + (a1 - a0) * static_cast<double>(s) / per_edge;
        out.push_back({v1[0] + r * std::cos(ang), v1[1] + r * std::sin(ang)});
      }
    }
    return out;
  }

  // Smooth case: walk the zero level set by rays from the minimizer and
  // offset along the gradient normal.
  const QuadraticShape shape = quadratic_shape(f);
  if (shape.fmin > tol.feas_tol) throw InfeasibleError("safe_radius: empty sublevel set");
  for (int s = 0; s < samples; ++s) {
    const double ang = 2.0 * 3.14159265358979323846 * s / samples;
    const Vec u{std::cos(ang), std::sin(ang)};
    const auto along = [&](double t) {
      return f.value(Vec{shape.xstar[0] + t * u[0], shape.xstar[1] + t * u[1]});
    };
    double t_lo = 0.0, t_hi = 1.0;
    while (along(t_hi) <= 0.0) t_hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      if (along(mid) <= 0.0)
        t_lo = mid;
      else
        t_hi = mid;
    }
    const Vec p{shape.xstar[0] + t_lo * u[0], shape.xstar[1] + t_lo * u[1]};
    Vec g = f.eval_subgrad(p).second;
    const double gn = std::hypot(g[0], g[1]);
    if (gn < 1e-12) continue;
    out.push_back({p[0] + r * g[0] / gn, p[1] + r * g[1] / gn});
  }
  return out;
}

}  // namespace

double safe_radius(const ConvexInstance& inst, const ToleranceConfig& tol,
                   int boundary_samples) {
  validate_instance(inst, tol);
  const std::vector<Vec> boundary =
      offset_boundary_samples(inst.f0, 0.5 * inst.alpha0, tol, boundary_samples);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : boundary) m = std::min(m, inst.f0.value(p));
  if (m <= tol.solver_tol)
    throw PreconditionError("safe_radius: boundary minimum not positive (sampling too coarse)");
  return m / 4.0;
}

GapBoundResult gap_bound_check(const ConvexFunction& f1, const ConvexFunction& f2,
                               const BoxRegion& K1, const BoxRegion& K2, int grid_per_axis,
                               const ToleranceConfig& tol) {
  GapBoundResult res;
  const Metric coeff{NormSpec{Norm::l2}, MetricSpace::coeff};
  const Metric grad{NormSpec{Norm::l2}, MetricSpace::dual};

  const PointCloud U1 = linearize_on_box(f1, K1, grid_per_axis, tol);
  const PointCloud U2 = linearize_on_box(f2, K2, grid_per_axis, tol);
  res.lhs = hausdorff(U1, U2, coeff);

  const PointCloud G1 = subdiff_image(f1, K1, grid_per_axis, tol);
  const PointCloud G2 = subdiff_image(f2, K2, grid_per_axis, tol);
  res.image_gap = hausdorff(G1, G2, grad);

  res.rho = 0.0;
  for (const auto& box : {K1, K2})
    for (const auto& corner : box.corners())
      res.rho = std::max(res.rho, 1.0 + norm_value(corner, NormSpec{Norm::l2}, NormMode::primal));

  res.value_gap = std::max(sup_distance_on_box(f1, f2, K1, grid_per_axis),
                           sup_distance_on_box(f1, f2, K2, grid_per_axis));
  res.rhs = res.rho * res.image_gap + res.value_gap;
  res.holds = res.lhs <= res.rhs + std::max(1e-9, tol.solver_tol);
  return res;
}

double dist_to_sublevel(const ConvexFunction& f, const Vec& x, const ToleranceConfig& tol) {
  if (f.value(x) <= tol.feas_tol) return 0.0;
  if (f.is_max_affine())
    return project_polyhedron(x, sublevel_polyhedron(f), NormSpec{Norm::l2}, tol).dist;

  // Subgradient descent on f to find an interior anchor.
  Vec anchor(x.size(), 0.0);
  double anchor_val = f.value(anchor);
  Vec y = x;
  for (int it = 1; it <= 2000 && anchor_val > 0.0; ++it) {
    auto [v, g] = f.eval_subgrad(y);
    if (v < anchor_val) {
      anchor = y;
      anchor_val = v;
    }
    const double gn = norm_value(g, NormSpec{Norm::l2}, NormMode::primal);
    if (gn < 1e-14) break;
    axpy(-v / (gn * gn), g, y);
  }
  if (anchor_val > 0.0) throw InfeasibleError("dist_to_sublevel: empty sublevel set");

  // Bisection to the boundary gives a feasible start; then a projected
  // subgradient polish with restarts pulls it toward the true projection.
  const auto boundary_toward = [&](const Vec& from) {
    double t_lo = 0.0, t_hi = 1.0;  // from + t * (anchor - from)
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      Vec p = from;
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += mid * (anchor[j] - from[j]);
      if (f.value(p) <= 0.0)
        t_hi = mid;
      else
        t_lo = mid;
    }
    Vec p = from;
    for (std::size_t j = 0; j < p.size(); ++j) p[j] += t_hi * (anchor[j] - from[j]);
    return p;
  };

  Vec best = boundary_toward(x);
  double best_dist = norm_value(sub(best, x), NormSpec{Norm::l2}, NormMode::primal);
  for (int restart = 0; restart < 3; ++restart) {
    Vec yk = best;
    double step = best_dist * 0.5;
    for (int it = 0; it < 10000; ++it) {
      Vec dir = sub(x, yk);
      const double dn = norm_value(dir, NormSpec{Norm::l2}, NormMode::primal);
      if (dn < tol.solver_tol) break;
      Vec cand = yk;
      axpy(step / dn, dir, cand);
      if (f.value(cand) > 0.0) cand = boundary_toward(cand);
      const double cd = norm_value(sub(cand, x), NormSpec{Norm::l2}, NormMode::primal);
      if (cd < best_dist) {
        best_dist = cd;
        best = cand;
        yk = cand;
      } else {
        step *= 0.7;
        if (step < tol.solver_tol) break;
      }
    }
  }
  return best_dist;
}

ConvexLipResult convex_lipschitz_check(const ConvexInstance& inst, double kappa,
                                       const ConvexFunction& f1, const ConvexFunction& f2,
                                       const Vec& x1, double delta, const ToleranceConfig& tol,
                                       bool gradient_only, double stability_eps) {
  if (f1.dim() != inst.f0.dim() || f2.dim() != inst.f0.dim())
    throw DimensionError("convex_lipschitz_check: dimension mismatch");
  if (!(delta > 0.0)) throw InputError("convex_lipschitz_check: delta must be positive");

  ConvexLipResult res;
  const Kappa0Result k0 = compute_kappa0(inst, tol);
  res.kappa0_infinite = k0.kappa0.infinite;
  res.kappa0_value = k0.kappa0.infinite ? std::numeric_limits<double>::infinity()
                                        : k0.kappa0.value;

  const BoxRegion ebox = enlargement_box(inst, inst.alpha, tol);
  const double eta = safe_radius(inst, tol);
  res.delta_cap = std::min({eta, inst.alpha * inst.alpha,
                            (stability_eps / 4.0) * (stability_eps / 4.0)});

  // Hypotheses of the estimate, with the grid standing in for the true sup
  // distances. The grid is a lower bound, so callers that need certainty
  // should keep their perturbations at or below 0.9 * delta.
  std::string note;
  const double d1 = sup_distance_on_box(f1, inst.f0, ebox, inst.grid_per_axis);
  const double d2 = sup_distance_on_box(f2, inst.f0, ebox, inst.grid_per_axis);
  if (k0.kappa0.infinite || !(kappa > res.kappa0_value)) note += "kappa <= kappa0; ";
  if (d1 > delta + 1e-12) note += "f1 not within delta of f0; ";
  if (d2 > delta + 1e-12) note += "f2 not within delta of f0; ";
  const double xdist = norm_value(sub(x1, inst.x0), NormSpec{Norm::l2}, NormMode::primal);
  if (xdist > delta + 1e-12) note += "x1 not within delta of x0; ";
  if (f1.value(x1) > tol.feas_tol) note += "x1 infeasible for f1; ";
  if (delta > res.delta_cap) note += "delta above admissible cap; ";
  res.hypotheses_met = note.empty();
  res.hypothesis_note = note;

  const double sq = gradient_only ? 0.0 : std::sqrt(delta);
  const BoxRegion image_box = sq > 0.0 ? enlargement_box(inst, sq, tol)
                                       : enlargement_box(inst, 0.0, tol);
  const PointCloud G1 = subdiff_image(f1, image_box, inst.grid_per_axis, tol);
  const PointCloud G2 = subdiff_image(f2, image_box, inst.grid_per_axis, tol);
  res.image_gap = hausdorff(G1, G2, Metric{NormSpec{Norm::l2}, MetricSpace::dual});

  res.rho = 0.0;
  for (const auto& corner : ebox.corners())
    res.rho = std::max(res.rho, 1.0 + norm_value(corner, NormSpec{Norm::l2}, NormMode::primal));
  res.value_gap = sup_distance_on_box(f1, f2, ebox, inst.grid_per_axis);

  res.lhs = dist_to_sublevel(f2, x1, tol);
  res.rhs = kappa * (res.rho * res.image_gap + res.value_gap);
  res.holds = res.lhs <= res.rhs + std::max(1e-9, tol.solver_tol);
  return res;
}

}  // namespace lipmod
