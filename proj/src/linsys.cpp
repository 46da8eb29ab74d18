#include "lipmod/linsys.hpp"

#include <algorithm>
#include <cmath>

namespace lipmod {

LinearSystem::LinearSystem(int n_, PointCloud rows, NormSpec spec_)
    : n(n_), coeffs(std::move(rows)), spec(spec_) {
  if (n < 1) throw DimensionError("linear system: n must be >= 1");
  if (coeffs.dim != n + 1)
    throw DimensionError("linear system: coefficient cloud must have dimension n+1");
}

Vec LinearSystem::gradient(std::size_t i) const {
  const Vec& p = coeffs.points[i];
  return Vec(p.begin(), p.end() - 1);
}

double LinearSystem::offset(std::size_t i) const { return coeffs.points[i].back(); }

Polyhedron LinearSystem::polyhedron() const {
  Polyhedron P;
  P.n = n;
  P.rows.reserve(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) P.rows.push_back({gradient(i), offset(i)});
  return P;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::zero:
      return "zero";
    case Classification::infinite:
      return "infinite";
    default:
      return "finite";
  }
}

double dist_to_feasible(const Vec& x, const LinearSystem& sys, const ToleranceConfig& tol) {
  // Infeasibility surfaces from the projection itself.
  return project_polyhedron(x, sys.polyhedron(), sys.spec, tol).dist;
}

namespace {

Vec slacks(const Vec& x0, const LinearSystem& sys) {
  Vec s(sys.row_count());
  for (std::size_t i = 0; i < sys.row_count(); ++i)
    s[i] = sys.offset(i) - dot(sys.gradient(i), x0);
  return s;
}

}  // namespace

std::vector<int> active_set(const Vec& x0, const LinearSystem& sys, const ToleranceConfig& tol) {
  if (static_cast<int>(x0.size()) != sys.n)
    throw DimensionError("active_set: dimension mismatch");
  const Vec s = slacks(x0, sys);
  for (double v : s)
    if (v < -tol.feas_tol)
      throw PreconditionError("active_set: x0 infeasible beyond feas_tol");
  std::vector<int> idx;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::fabs(s[i]) <= tol.active_tol) idx.push_back(static_cast<int>(i));
  return idx;
}

namespace {

// Deduplicate candidate generators while remembering, per surviving
// generator, one original index; min-norm weights then map back exactly.
struct DedupedGenerators {
  std::vector<Vec> points;
  std::vector<std::size_t> source;

  void insert(Vec p, std::size_t origin) {
    for (const auto& q : points)
      if (q == p) return;
    points.push_back(std::move(p));
    source.push_back(origin);
  }
};

}  // namespace

CSetResult c_set_distance(const LinearSystem& sys, const Vec& x0, const ToleranceConfig& tol) {
  CSetResult res;
  res.active = active_set(x0, sys, tol);
  res.witness.assign(sys.row_count(), 0.0);
  if (res.active.empty()) {
    res.empty = true;
    res.zero_in = false;
    res.dist = ExtReal::inf();
    return res;
  }
  DedupedGenerators gens;
  for (int i : res.active)
    gens.insert(sys.gradient(static_cast<std::size_t>(i)), static_cast<std::size_t>(i));
  const MinNormResult mn =
      min_norm_point(PointCloud(sys.n, gens.points), sys.spec, tol);
  res.dist = ExtReal::finite(mn.dist);
  res.zero_in = mn.dist <= tol.solver_tol;
  for (std::size_t k = 0; k < gens.source.size(); ++k)
    res.witness[gens.source[k]] = mn.weights[k];
  return res;
}

CSetResult c_set_distance_fallback(const LinearSystem& sys, const Vec& x0,
                                   const ToleranceConfig& tol, double eq_tol) {
  if (static_cast<int>(x0.size()) != sys.n)
    throw DimensionError("c_set_distance_fallback: dimension mismatch");
  const Vec s = slacks(x0, sys);
  for (double v : s)
    if (v < -tol.feas_tol)
      throw PreconditionError("c_set_distance_fallback: x0 infeasible beyond feas_tol");
  const std::size_t m = s.size();

  // Vertices of {lambda in simplex : s'lambda <= eq_tol}: unit vectors with
  // small slack plus the cut points of simplex edges crossing the bound.
  std::vector<Vec> verts;
  for (std::size_t i = 0; i < m; ++i) {
    if (s[i] <= eq_tol) {
      Vec e(m, 0.0);
      e[i] = 1.0;
      verts.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (s[i] <= eq_tol) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (s[j] > eq_tol) continue;
      const double t = (eq_tol - s[j]) / (s[i] - s[j]);
      if (t <= 1e-15) continue;
      Vec v(m, 0.0);
      v[i] = t;
      v[j] = 1.0 - t;
      verts.push_back(std::move(v));
    }
  }

  CSetResult res;
  res.witness.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (std::fabs(s[i]) <= tol.active_tol) res.active.push_back(static_cast<int>(i));
  if (verts.empty()) {
    res.empty = true;
    res.dist = ExtReal::inf();
    return res;
  }

  DedupedGenerators images;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    Vec u(sys.n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (verts[k][i] != 0.0) axpy(verts[k][i], sys.gradient(i), u);
    images.insert(std::move(u), k);
  }

  const MinNormResult mn =
      min_norm_point(PointCloud(sys.n, images.points), sys.spec, tol);
  res.dist = ExtReal::finite(mn.dist);
  res.zero_in = mn.dist <= tol.solver_tol;

  // Convex combination of vertex weight vectors is itself a valid lambda.
  for (std::size_t k = 0; k < images.source.size(); ++k) {
    const Vec& v = verts[images.source[k]];
    for (std::size_t i = 0; i < m; ++i) res.witness[i] += mn.weights[k] * v[i];
  }
  double sum = 0.0;
  for (double v : res.witness) sum += v;
  if (sum > 0.0)
    for (double& v : res.witness) v /= sum;
  return res;
}

SscReport ssc_margin(const LinearSystem& sys, double box_radius, const ToleranceConfig& tol) {
  // Variables (x, eps); maximize eps subject to a'x + eps <= b and the box.
  const int nv = sys.n + 1;
  Polyhedron P;
  P.n = nv;
  for (std::size_t i = 0; i < sys.row_count(); ++i) {
    Halfspace row;
    row.a = sys.gradient(i);
    row.a.push_back(1.0);
    row.b = sys.offset(i);
    P.rows.push_back(std::move(row));
  }
  LpBox box;
  box.lo.assign(nv, -box_radius);
  box.hi.assign(nv, box_radius);
  // eps itself is bounded by the rows; keep a wide symmetric box anyway.
  Vec obj(nv, 0.0);
  obj[sys.n] = 1.0;
  const LpResult lp = solve_lp(obj, LpSense::maximize, P, box, tol);
  if (lp.status != LpStatus::optimal) throw SolverError("ssc_margin: margin LP failed");

  SscReport rep;
  rep.margin = lp.value;
  rep.point.assign(lp.x.begin(), lp.x.begin() + sys.n);
  rep.box_radius = box_radius;
  rep.box_active = false;
  for (int j = 0; j < sys.n; ++j)
    if (std::fabs(std::fabs(rep.point[static_cast<std::size_t>(j)]) - box_radius) <= 1e-6)
      rep.box_active = true;
  return rep;
}

ModulusReport lipschitz_modulus(const LinearSystem& sys, const Vec& x0,
                                const ToleranceConfig& tol, double box_radius) {
  if (static_cast<int>(x0.size()) != sys.n)
    throw DimensionError("lipschitz_modulus: dimension mismatch");

  ModulusReport rep;
  rep.x0_used = x0;
  const Vec s = slacks(x0, sys);
  double viol = 0.0;
  for (double v : s) viol = std::max(viol, -v);
  if (viol > tol.feas_tol) {
    // Slightly infeasible nominal points are projected back onto F(U);
    // the report records that the formula was evaluated at the projection.
    const Polyhedron P = sys.polyhedron();
    if (!polyhedron_feasible(P, tol))
      throw InfeasibleError("lipschitz_modulus: system has no solutions");
    rep.x0_used = project_polyhedron(x0, P, sys.spec, tol).point;
    rep.x0_projected = true;
  }

  const CSetResult cs = c_set_distance(sys, rep.x0_used, tol);
  rep.c_distance = cs.dist;
  rep.c_empty = cs.empty;
  rep.zero_in_c = cs.zero_in;
  rep.active_indices = cs.active;
  rep.witness = cs.witness;

  if (cs.empty) {
    rep.modulus = ExtReal::finite(0.0);
    rep.classification = Classification::zero;
  } else if (cs.zero_in) {
    rep.modulus = ExtReal::inf();
    rep.classification = Classification::infinite;
  } else {
    const double num = norm_value(rep.x0_used, sys.spec, NormMode::primal) + 1.0;
    rep.modulus = ExtReal::finite(num / cs.dist.value);
    rep.classification = Classification::finite;
  }

  rep.ssc = ssc_margin(sys, box_radius, tol);
  rep.ssc_margin = rep.ssc.margin;
  return rep;
}

}  // namespace lipmod
