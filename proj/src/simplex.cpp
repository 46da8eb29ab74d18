#include <algorithm>
#include <cmath>
#include <limits>

#include "lipmod/hulls.hpp"

namespace lipmod {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;

enum class PhaseOutcome { optimal, unbounded, iteration_limit };

// Dense tableau. Columns are laid out as [x+ | x- | slacks | artificials];
// free variables enter split as x = x+ - x-.
struct Tableau {
  int rows = 0;
  int cols = 0;
  Matrix a;
  Vec rhs;
  Vec z;  // reduced-cost row
  std::vector<int> basis;
  std::vector<char> allowed;

  void pivot(int r, int c) {
    const double piv = a[r][c];
    for (int j = 0; j < cols; ++j) a[r][j] /= piv;
    rhs[r] /= piv;
    a[r][c] = 1.0;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      a[i][c] = 0.0;
      rhs[i] -= f * rhs[r];
      if (rhs[i] < 0.0 && rhs[i] > -1e-13) rhs[i] = 0.0;
    }
    const double fz = z[c];
    if (fz != 0.0) {
      for (int j = 0; j < cols; ++j) z[j] -= fz * a[r][j];
      z[c] = 0.0;
    }
    basis[r] = c;
  }

  void reset_costs(const Vec& cost) {
    z = cost;
    for (int i = 0; i < rows; ++i) {
      const double cb = cost[static_cast<std::size_t>(basis[i])];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols; ++j) z[j] -= cb * a[i][j];
    }
    for (int i = 0; i < rows; ++i) z[basis[i]] = 0.0;
  }

  PhaseOutcome iterate(int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
      // Bland's rule: smallest improving column enters, smallest basic
      // index leaves among ratio ties. No cycling.
      int enter = -1;
      for (int j = 0; j < cols; ++j)
        if (allowed[j] && z[j] < -kCostEps) {
          enter = j;
          break;
        }
      if (enter < 0) return PhaseOutcome::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        if (a[i][enter] <= kPivotEps) continue;
        const double ratio = rhs[i] / a[i][enter];
        if (ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return PhaseOutcome::unbounded;
      pivot(leave, enter);
    }
    return PhaseOutcome::iteration_limit;
  }
};

}  // namespace

LpResult solve_lp(const Vec& objective, LpSense sense, const Polyhedron& constraints,
                  const std::optional<LpBox>& bounds, const ToleranceConfig& tol) {
  const int n = constraints.n;
  if (static_cast<int>(objective.size()) != n)
    throw DimensionError("solve_lp: objective dimension mismatch");

  // Gather rows: constraint rows first, then box rows.
  std::vector<Halfspace> rows = constraints.rows;
  for (const auto& r : rows)
    if (static_cast<int>(r.a.size()) != n)
      throw DimensionError("solve_lp: constraint row dimension mismatch");
  if (bounds) {
    if (static_cast<int>(bounds->lo.size()) != n || static_cast<int>(bounds->hi.size()) != n)
      throw DimensionError("solve_lp: bounds dimension mismatch");
    for (int j = 0; j < n; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      rows.push_back({e, bounds->hi[j]});
      Vec me(n, 0.0);
      me[j] = -1.0;
      rows.push_back({me, -bounds->lo[j]});
    }
  }

  const int m = static_cast<int>(rows.size());
  Vec c = objective;
  if (sense == LpSense::maximize)
    for (double& v : c) v = -v;

  if (m == 0) {
    // No constraints at all: bounded only when the objective vanishes.
    bool zero = true;
    for (double v : c)
      if (v != 0.0) zero = false;
    if (zero) return {LpStatus::optimal, Vec(n, 0.0), 0.0};
    return {LpStatus::unbounded, Vec(n, 0.0), 0.0};
  }

  // Count artificials: rows whose rhs is negative after slack insertion.
  int n_art = 0;
  for (const auto& r : rows)
    if (r.b < 0.0) ++n_art;

  Tableau t;
  t.rows = m;
  t.cols = 2 * n + m + n_art;
  t.a.assign(m, Vec(t.cols, 0.0));
  t.rhs.assign(m, 0.0);
  t.basis.assign(m, -1);
  t.allowed.assign(t.cols, 1);

  int art = 2 * n + m;
  for (int i = 0; i < m; ++i) {
    const double sign = rows[i].b < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      t.a[i][j] = sign * rows[i].a[j];
      t.a[i][n + j] = -sign * rows[i].a[j];
    }
    t.a[i][2 * n + i] = sign;  // slack
    t.rhs[i] = sign * rows[i].b;
    if (sign < 0.0) {
      t.a[i][art] = 1.0;
      t.basis[i] = art;
      ++art;
    } else {
      t.basis[i] = 2 * n + i;
    }
  }

  double scale = 1.0;
  for (const auto& r : rows) scale = std::max(scale, std::fabs(r.b));

  if (n_art > 0) {
    Vec phase1(t.cols, 0.0);
    for (int j = 2 * n + m; j < t.cols; ++j) phase1[j] = 1.0;
    t.reset_costs(phase1);
    const PhaseOutcome out = t.iterate(tol.max_iter);
    if (out == PhaseOutcome::iteration_limit)
      throw SolverError("solve_lp: phase-1 iteration limit (cycling guard)");
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= 2 * n + m) infeas += t.rhs[i];
    if (infeas > 1e-8 * (1.0 + scale)) return {LpStatus::infeasible, Vec(n, 0.0), 0.0};

    // Drive leftover artificials out of the basis, dropping redundant rows.
    for (int i = m - 1; i >= 0; --i) {
      if (t.basis[i] < 2 * n + m) continue;
      int col = -1;
      for (int j = 0; j < 2 * n + m; ++j)
        if (std::fabs(t.a[i][j]) > kPivotEps) {
          col = j;
          break;
        }
      if (col >= 0) {
        t.pivot(i, col);
      } else {
        t.a.erase(t.a.begin() + i);
        t.rhs.erase(t.rhs.begin() + i);
        t.basis.erase(t.basis.begin() + i);
        --t.rows;
      }
    }
    for (int j = 2 * n + m; j < t.cols; ++j) t.allowed[j] = 0;
  }

  Vec phase2(t.cols, 0.0);
  for (int j = 0; j < n; ++j) {
    phase2[j] = c[j];
    phase2[n + j] = -c[j];
  }
  t.reset_costs(phase2);
  const PhaseOutcome out = t.iterate(tol.max_iter);
  if (out == PhaseOutcome::iteration_limit)
    throw SolverError("solve_lp: phase-2 iteration limit (cycling guard)");
  if (out == PhaseOutcome::unbounded) return {LpStatus::unbounded, Vec(n, 0.0), 0.0};

  Vec values(t.cols, 0.0);
  for (int i = 0; i < t.rows; ++i) values[t.basis[i]] = t.rhs[i];
  Vec x(n, 0.0);
  for (int j = 0; j < n; ++j) x[j] = values[j] - values[n + j];

  double violation = 0.0;
  for (const auto& r : rows) violation = std::max(violation, dot(r.a, x) - r.b);
  if (violation > 1e-7 * (1.0 + scale))
    throw SolverError("solve_lp: solution violates constraints", violation);

  return {LpStatus::optimal, x, dot(objective, x)};
}

bool polyhedron_feasible(const Polyhedron& P, const ToleranceConfig& tol) {
  return solve_lp(Vec(P.n, 0.0), LpSense::minimize, P, std::nullopt, tol).status ==
         LpStatus::optimal;
}

std::vector<Vec> polyhedron_vertices(const Polyhedron& P, const ToleranceConfig& tol) {
  std::vector<Vec> verts;
  const auto feasible = [&](const Vec& x) {
    for (const auto& r : P.rows)
      if (dot(r.a, x) > r.b + 1e-7) return false;
    return true;
  };
  if (P.n == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& r : P.rows) {
      const double a = r.a[0];
      if (a > tol.solver_tol)
        hi = std::min(hi, r.b / a);
      else if (a < -tol.solver_tol)
        lo = std::max(lo, r.b / a);
      else if (r.b < -tol.feas_tol)
        return {};
    }
    if (lo > hi + tol.feas_tol) return {};
    if (std::isfinite(lo)) verts.push_back({lo});
    if (std::isfinite(hi) && (verts.empty() || hi != lo)) verts.push_back({hi});
    return verts;
  }
  if (P.n != 2) throw DimensionError("polyhedron_vertices: only dimensions 1 and 2");
  const auto m = P.rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& ri = P.rows[i];
      const auto& rj = P.rows[j];
      const double det = ri.a[0] * rj.a[1] - ri.a[1] * rj.a[0];
      if (std::fabs(det) < 1e-10) continue;
      Vec x(2);
      x[0] = (ri.b * rj.a[1] - ri.a[1] * rj.b) / det;
      x[1] = (ri.a[0] * rj.b - ri.b * rj.a[0]) / det;
      if (!feasible(x)) continue;
      bool dup = false;
      for (const auto& v : verts)
        if (std::fabs(v[0] - x[0]) < 1e-9 && std::fabs(v[1] - x[1]) < 1e-9) dup = true;
      if (!dup) verts.push_back(std::move(x));
    }
  }
  return verts;
}

}  // namespace lipmod
