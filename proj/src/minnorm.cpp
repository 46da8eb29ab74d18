#include <algorithm>
#include <cmath>
#include <limits>

#include "lipmod/hulls.hpp"

namespace lipmod {

namespace {

// Wolfe's nearest-point method on conv(P): maintains a corral of affinely
// independent generators, alternating between adding the most violating
// generator and restoring feasible affine weights. Finite for exact
// arithmetic; the iteration cap is a safety net.
MinNormResult wolfe_min_norm(const std::vector<Vec>& pts, const ToleranceConfig& tol) {
  const std::size_t k = pts.size();

  std::size_t start = 0;
  double start_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double ni = dot(pts[i], pts[i]);
    if (ni < start_norm) {
      start_norm = ni;
      start = i;
    }
  }

  std::vector<std::size_t> corral{start};
  Vec w{1.0};
  Vec x = pts[start];

  const auto rebuild_x = [&] {
    x.assign(x.size(), 0.0);
    for (std::size_t s = 0; s < corral.size(); ++s) axpy(w[s], pts[corral[s]], x);
  };

  // Affine minimizer of the norm over aff{corral}: bordered Gram system.
  const auto affine_weights = [&](Vec& alpha) {
    const std::size_t s = corral.size();
    Matrix m(s + 1, Vec(s + 1, 0.0));
    Vec rhs(s + 1, 0.0);
    rhs[0] = 1.0;
    for (std::size_t i = 0; i < s; ++i) {
      m[0][i + 1] = 1.0;
      m[i + 1][0] = 1.0;
      for (std::size_t j = 0; j < s; ++j) m[i + 1][j + 1] = dot(pts[corral[i]], pts[corral[j]]);
    }
    Vec sol;
    if (!solve_dense(std::move(m), std::move(rhs), sol)) return false;
    alpha.assign(sol.begin() + 1, sol.end());
    return true;
  };

  for (int iter = 0; iter < tol.max_iter; ++iter) {
    // Most violating generator under the optimality test x'p >= x'x.
    std::size_t entering = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const double v = dot(x, pts[i]);
      if (v < best - 1e-15) {
        best = v;
        entering = i;
      }
    }
    const double xx = dot(x, x);
    if (xx - best <= tol.solver_tol * (1.0 + xx)) break;
    if (std::find(corral.begin(), corral.end(), entering) != corral.end()) break;

    corral.push_back(entering);
    w.push_back(0.0);

    bool stalled = false;
    for (int minor = 0; minor < tol.max_iter; ++minor) {
      Vec alpha;
      if (!affine_weights(alpha)) {
        // Degenerate add: the new generator is affinely dependent; drop it.
        corral.pop_back();
        w.pop_back();
        stalled = true;
        break;
      }
      bool interior = true;
      for (double a : alpha)
        if (a < -1e-12) interior = false;
      if (interior) {
        w = alpha;
        for (double& v : w) v = std::max(v, 0.0);
        double sum = 0.0;
        for (double v : w) sum += v;
        for (double& v : w) v /= sum;
        break;
      }
      double theta = 1.0;
      for (std::size_t s = 0; s < corral.size(); ++s) {
        if (alpha[s] < 1e-15 && w[s] - alpha[s] > 1e-15)
          theta = std::min(theta, w[s] / (w[s] - alpha[s]));
      }
      for (std::size_t s = 0; s < corral.size(); ++s)
        w[s] = (1.0 - theta) * w[s] + theta * alpha[s];
      for (std::size_t s = corral.size(); s-- > 0;) {
        if (w[s] <= 1e-12) {
          corral.erase(corral.begin() + static_cast<long>(s));
          w.erase(w.begin() + static_cast<long>(s));
        }
      }
      double sum = 0.0;
      for (double v : w) sum += v;
      for (double& v : w) v /= sum;
    }
    rebuild_x();
    if (stalled) break;
  }

  MinNormResult res;
  res.point = x;
  res.dist = std::sqrt(std::max(0.0, dot(x, x)));
  res.weights.assign(k, 0.0);
  for (std::size_t s = 0; s < corral.size(); ++s) res.weights[corral[s]] = w[s];
  return res;
}

// Polyhedral dual norms reduce to an LP over (lambda, t).
MinNormResult lp_min_norm(const std::vector<Vec>& pts, NormSpec spec,
                          const ToleranceConfig& tol) {
  const std::size_t k = pts.size();
  const std::size_t d = pts[0].size();
  const Norm dual = spec.dual().p;
  const std::size_t n_t = dual == Norm::linf ? 1 : d;
  const int nv = static_cast<int>(k + n_t);

  Polyhedron P;
  P.n = nv;
  // +- (G' lambda)_j <= t (or t_j)
  for (std::size_t j = 0; j < d; ++j) {
    for (const double sign : {1.0, -1.0}) {
      Halfspace row;
      row.a.assign(nv, 0.0);
      for (std::size_t i = 0; i < k; ++i) row.a[i] = sign * pts[i][j];
      row.a[k + (dual == Norm::linf ? 0 : j)] = -1.0;
      row.b = 0.0;
      P.rows.push_back(std::move(row));
    }
  }
  // lambda in the unit simplex
  {
    Halfspace up, down;
    up.a.assign(nv, 0.0);
    down.a.assign(nv, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      up.a[i] = 1.0;
      down.a[i] = -1.0;
    }
    up.b = 1.0;
    down.b = -1.0;
    P.rows.push_back(std::move(up));
    P.rows.push_back(std::move(down));
  }
  for (std::size_t i = 0; i < k; ++i) {
    Halfspace row;
    row.a.assign(nv, 0.0);
    row.a[i] = -1.0;
    row.b = 0.0;
    P.rows.push_back(std::move(row));
  }

  Vec obj(nv, 0.0);
  for (std::size_t j = 0; j < n_t; ++j) obj[k + j] = 1.0;
  const LpResult lp = solve_lp(obj, LpSense::minimize, P, std::nullopt, tol);
  if (lp.status != LpStatus::optimal)
    throw SolverError("min_norm_point: LP reformulation failed");

  MinNormResult res;
  res.weights.assign(k, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    res.weights[i] = std::max(0.0, lp.x[i]);
    sum += res.weights[i];
  }
  for (double& v : res.weights) v /= sum;
  res.point.assign(d, 0.0);
  for (std::size_t i = 0; i < k; ++i) axpy(res.weights[i], pts[i], res.point);
  res.dist = norm_value(res.point, spec, NormMode::dual);
  return res;
}

}  // namespace

MinNormResult min_norm_point(const PointCloud& generators, NormSpec spec,
                             const ToleranceConfig& tol) {
  if (generators.points.empty()) throw InputError("min_norm_point: empty generator set");
  if (spec.p == Norm::l2) return wolfe_min_norm(generators.points, tol);
  return lp_min_norm(generators.points, spec, tol);
}

InclusionResult inclusion_within(const PointCloud& A, const PointCloud& Bgen, double eps,
                                 NormSpec spec, const ToleranceConfig& tol) {
  if (A.dim != Bgen.dim) throw DimensionError("inclusion_within: dimension mismatch");
  double worst = 0.0;
  for (const auto& a : A.points) {
    std::vector<Vec> shifted;
    shifted.reserve(Bgen.points.size());
    for (const auto& g : Bgen.points) shifted.push_back(sub(g, a));
    const MinNormResult mn = min_norm_point(PointCloud(Bgen.dim, std::move(shifted)), spec, tol);
    worst = std::max(worst, mn.dist);
  }
  return {worst <= eps + tol.solver_tol, worst};
}

}  // namespace lipmod
