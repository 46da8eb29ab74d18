#include <algorithm>
#include <cmath>
#include <limits>

#include "lipmod/hulls.hpp"

namespace lipmod {

namespace {

double max_violation(const Vec& y, const Polyhedron& P) {
  double v = 0.0;
  for (const auto& r : P.rows) v = std::max(v, dot(r.a, y) - r.b);
  return v;
}

// Cyclic projections onto the most violated halfspace. Only used to clean
// up residual violations of order solver_tol, so the movement is tiny.
void restore_feasibility(Vec& y, const Polyhedron& P, const ToleranceConfig& tol) {
  for (int it = 0; it < 1000; ++it) {
    int worst = -1;
    double worst_v = tol.feas_tol * 0.1;
    for (std::size_t i = 0; i < P.rows.size(); ++i) {
      const double v = dot(P.rows[i].a, y) - P.rows[i].b;
      if (v > worst_v) {
        worst_v = v;
        worst = static_cast<int>(i);
      }
    }
    if (worst < 0) return;
    const auto& r = P.rows[static_cast<std::size_t>(worst)];
    const double a2 = dot(r.a, r.a);
    if (a2 <= 0.0) return;
    axpy(-worst_v / a2, r.a, y);
  }
}

ProjectionResult project_l2(const Vec& x, const Polyhedron& P, const ToleranceConfig& tol) {
  const std::size_t m = P.rows.size();
  Vec y = x;
  Vec lambda(m, 0.0);
  Vec a2(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) a2[i] = dot(P.rows[i].a, P.rows[i].a);

  // Hildreth: coordinate ascent on the dual of the projection QP. The
  // feasibility certificate is only bought (one phase-1 LP) when the sweep
  // stalls, which keeps the common feasible case LP-free.
  bool converged = false;
  const auto sweep_until = [&](int sweeps) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      double move = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (a2[i] <= 0.0) continue;
        const double step = (dot(P.rows[i].a, y) - P.rows[i].b) / a2[i];
        const double next = std::max(0.0, lambda[i] + step);
        const double delta = next - lambda[i];
        if (delta == 0.0) continue;
        lambda[i] = next;
        axpy(-delta, P.rows[i].a, y);
        move = std::max(move, std::fabs(delta) * std::sqrt(a2[i]));
      }
      if (move < tol.solver_tol && max_violation(y, P) < tol.feas_tol) {
        converged = true;
        return;
      }
    }
  };
  sweep_until(std::min(tol.max_iter, 500));
  if (!converged) {
    if (!polyhedron_feasible(P, tol))
      throw InfeasibleError("project_polyhedron: infeasible constraint system");
    sweep_until(tol.max_iter);
  }

  // Active-set polish: solve the equality-constrained projection on the
  // rows with positive multipliers and keep it when it verifies exactly.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i)
    if (lambda[i] > 1e-10) active.push_back(i);
  if (!active.empty() && active.size() <= x.size() + 4) {
    const std::size_t s = active.size();
    Matrix gram(s, Vec(s, 0.0));
    Vec rhs(s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      const auto& ri = P.rows[active[i]];
      rhs[i] = dot(ri.a, x) - ri.b;
      for (std::size_t j = 0; j < s; ++j) gram[i][j] = dot(ri.a, P.rows[active[j]].a);
    }
    Vec mu;
    if (solve_dense(std::move(gram), std::move(rhs), mu)) {
      Vec cand = x;
      bool ok = true;
      for (std::size_t i = 0; i < s; ++i) {
        if (mu[i] < -1e-9) ok = false;
        axpy(-mu[i], P.rows[active[i]].a, cand);
      }
      if (ok && max_violation(cand, P) <= tol.feas_tol) {
        const Vec dy = sub(cand, x);
        const Vec dyo = sub(y, x);
        if (dot(dy, dy) <= dot(dyo, dyo) + 1e-9) y = cand;
      }
    }
  }

  restore_feasibility(y, P, tol);
  if (max_violation(y, P) > tol.feas_tol)
    throw SolverError("project_polyhedron: did not reach feasibility",
                      norm_value(sub(y, x), NormSpec{Norm::l2}, NormMode::primal));
  return {y, norm_value(sub(y, x), NormSpec{Norm::l2}, NormMode::primal)};
}

// l1 / linf projections via epigraph variables.
ProjectionResult project_lp_norm(const Vec& x, const Polyhedron& P, NormSpec spec,
                                 const ToleranceConfig& tol) {
  const int n = P.n;
  const bool is_linf = spec.p == Norm::linf;
  const int n_t = is_linf ? 1 : n;
  const int nv = n + n_t;

  Polyhedron Q;
  Q.n = nv;
  for (const auto& r : P.rows) {
    Halfspace row;
    row.a.assign(nv, 0.0);
    std::copy(r.a.begin(), r.a.end(), row.a.begin());
    row.b = r.b;
    Q.rows.push_back(std::move(row));
  }
  for (int j = 0; j < n; ++j) {
    for (const double sign : {1.0, -1.0}) {
      Halfspace row;
      row.a.assign(nv, 0.0);
      row.a[j] = sign;
      row.a[n + (is_linf ? 0 : j)] = -1.0;
      row.b = sign * x[static_cast<std::size_t>(j)];
      Q.rows.push_back(std::move(row));
    }
  }
  Vec obj(nv, 0.0);
  for (int j = 0; j < n_t; ++j) obj[n + j] = 1.0;

  const LpResult lp = solve_lp(obj, LpSense::minimize, Q, std::nullopt, tol);
  if (lp.status == LpStatus::infeasible)
    throw InfeasibleError("project_polyhedron: infeasible constraint system");
  if (lp.status != LpStatus::optimal)
    throw SolverError("project_polyhedron: projection LP failed");

  Vec y(lp.x.begin(), lp.x.begin() + n);
  restore_feasibility(y, P, tol);
  return {y, norm_value(sub(y, x), spec, NormMode::primal)};
}

}  // namespace

ProjectionResult project_polyhedron(const Vec& x, const Polyhedron& P, NormSpec spec,
                                    const ToleranceConfig& tol) {
  if (static_cast<int>(x.size()) != P.n)
    throw DimensionError("project_polyhedron: dimension mismatch");
  for (const auto& r : P.rows) {
    if (static_cast<int>(r.a.size()) != P.n)
      throw DimensionError("project_polyhedron: row dimension mismatch");
    double na = 0.0;
    for (double v : r.a) na = std::max(na, std::fabs(v));
    if (na == 0.0 && r.b < -tol.feas_tol)
      throw InfeasibleError("project_polyhedron: contradictory zero row");
  }

  if (max_violation(x, P) <= tol.feas_tol) return {x, 0.0};

  if (spec.p == Norm::l2) return project_l2(x, P, tol);
  return project_lp_norm(x, P, spec, tol);
}

}  // namespace lipmod
