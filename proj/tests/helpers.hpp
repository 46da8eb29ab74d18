#pragma once

// Shared generators and brute-force oracles for the test suites. Oracles
// stay independent of the implementation paths they check: grid refinement
// over weights or boxes, plain enumeration over clouds.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lipmod/hulls.hpp"
#include "lipmod/linsys.hpp"
#include "lipmod/rng.hpp"

namespace lipmod::testing {

inline Vec random_vec(int n, SplitMix64& rng, double scale = 2.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

inline PointCloud random_cloud(int dim, int count, SplitMix64& rng, double scale = 3.0) {
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_vec(dim, rng, scale));
  return PointCloud(dim, std::move(pts));
}

// Exhaustive excess for cross-checking the kernels.
inline double excess_oracle(const PointCloud& A, const PointCloud& B, const Metric& m) {
  double worst = 0.0;
  for (const auto& p : A.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : B.points) best = std::min(best, m.distance(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

// Multilevel scan of a convex (possibly extended-valued) function on an
// interval. For 1-D convex functions the grid argmin brackets the true
// minimizer, so shrinking to the neighbouring cells never loses it.
template <typename F>
double refine_convex_1d(F&& f, double lo, double hi, int levels = 7, int steps = 128) {
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < levels; ++level) {
    const double cell = (hi - lo) / steps;
    double level_best = std::numeric_limits<double>::infinity();
    double level_arg = 0.5 * (lo + hi);
    for (int i = 0; i <= steps; ++i) {
      const double t = lo + cell * i;
      const double v = f(t);
      if (v < level_best) {
        level_best = v;
        level_arg = t;
      }
    }
    best = std::min(best, level_best);
    lo = std::max(lo, level_arg - 2.0 * cell);
    hi = std::min(hi, level_arg + 2.0 * cell);
  }
  return best;
}

// Min of the dual norm over the convex hull of up to three generators:
// nested interval refinements over the weight simplex.
inline double min_norm_oracle(const PointCloud& gens, NormSpec spec) {
  const std::size_t k = gens.size();
  const auto norm_at = [&](double w0, double w1) {
    Vec u(gens.dim, 0.0);
    const double ws[3] = {w0, w1, 1.0 - w0 - w1};
    for (std::size_t i = 0; i < k; ++i) axpy(ws[i], gens.points[i], u);
    return norm_value(u, spec, NormMode::dual);
  };
  if (k == 1) return norm_at(1.0, 0.0);
  if (k == 2) return refine_convex_1d([&](double w0) { return norm_at(w0, 1.0 - w0); }, 0.0, 1.0);
  const auto slice_min = [&](double w0) {
    return refine_convex_1d([&](double w1) { return norm_at(w0, w1); }, 0.0, 1.0 - w0, 6, 96);
  };
  return refine_convex_1d(slice_min, 0.0, 1.0, 6, 96);
}

// Euclidean projection distance for 2-D polyhedra: the vertical slice at
// each abscissa is an exact interval, so the slice distance is closed form
// and only the outer abscissa needs refinement.
inline double projection_oracle_2d(const Vec& x, const Polyhedron& P, double box_half) {
  const auto slice_dist = [&](double a) {
    double ylo = -1e9, yhi = 1e9;
    for (const auto& r : P.rows) {
      const double rest = r.b - r.a[0] * a;
      if (r.a[1] > 1e-12)
        yhi = std::min(yhi, rest / r.a[1]);
      else if (r.a[1] < -1e-12)
        ylo = std::max(ylo, rest / r.a[1]);
      else if (rest < 0.0)
        return std::numeric_limits<double>::infinity();
    }
    if (ylo > yhi) return std::numeric_limits<double>::infinity();
    const double y = std::clamp(x[1], ylo, yhi);
    return std::hypot(a - x[0], y - x[1]);
  };
  return refine_convex_1d(slice_dist, x[0] - box_half, x[0] + box_half, 8, 256);
}

struct RandomSystem {
  LinearSystem sys;
  Vec x0;
};

// Feasible system with a controlled active set at x0: slacks are exactly
// solved to zero on the chosen rows and keep a clear margin elsewhere, so
// activity classification is never borderline.
inline RandomSystem random_feasible_system(SplitMix64& rng, int max_n = 4, int max_rows = 12) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int n = 1 + rng.uniform_int(max_n);
    const int m = 1 + rng.uniform_int(max_rows);
    const NormSpec spec{static_cast<Norm>(rng.uniform_int(3))};
    const Vec interior = random_vec(n, rng, 1.0);

    std::vector<Vec> rows;
    for (int i = 0; i < m; ++i) {
      Vec a = random_vec(n, rng, 2.0);
      double an = 0.0;
      for (double v : a) an = std::max(an, std::fabs(v));
      if (an < 0.2) {
        --i;
        continue;
      }
      Vec row = a;
      row.push_back(dot(a, interior) + rng.uniform(0.1, 2.0));
      rows.push_back(std::move(row));
    }

    const std::size_t row_count = rows.size();
    const int want_active =
        rng.uniform_int(std::min(n, static_cast<int>(row_count)) + 1);
    if (want_active == 0) return {LinearSystem(n, PointCloud(n + 1, rows), spec), interior};

    // Solve a'x0 = b on the leading rows, then snap those offsets to the
    // exact dot product so the active slacks are floating-point zero.
    const std::size_t chosen = static_cast<std::size_t>(want_active);
    Matrix A;
    Vec b;
    for (std::size_t i = 0; i < chosen; ++i) {
      A.emplace_back(rows[i].begin(), rows[i].end() - 1);
      b.push_back(rows[i].back());
    }
    // Complete the square system with axis directions pinned at the interior
    // point so the solve stays well-posed.
    for (int j = static_cast<int>(chosen); j < n; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      A.push_back(std::move(e));
      b.push_back(interior[j]);
    }
    Vec x0;
    if (!solve_dense(A, b, x0)) continue;

    bool ok = all_finite(x0);
    if (ok)
      for (double v : x0) ok = ok && std::fabs(v) < 50.0;
    if (!ok) continue;
    for (std::size_t i = 0; i < chosen; ++i) {
      const Vec a(rows[i].begin(), rows[i].end() - 1);
      rows[i].back() = dot(a, x0);
    }
    for (std::size_t i = chosen; i < row_count && ok; ++i) {
      const Vec a(rows[i].begin(), rows[i].end() - 1);
      if (rows[i].back() - dot(a, x0) < 1e-4) ok = false;
    }
    if (ok) return {LinearSystem(n, PointCloud(n + 1, rows), spec), x0};
  }
  // Fall back to a trivially clean instance.
  return {LinearSystem(1, PointCloud(2, {{1.0, 1.0}}), NormSpec{Norm::l2}), Vec{1.0}};
}

}  // namespace lipmod::testing
