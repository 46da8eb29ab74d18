#include "lipmod/convexfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipmod {

BoxRegion::BoxRegion(Vec c, Vec hw) : center(std::move(c)), half_widths(std::move(hw)) {
  if (center.empty() || center.size() != half_widths.size())
    throw DimensionError("box region: center/half_width mismatch");
  for (double w : half_widths)
    if (!(w > 0.0)) throw InputError("box region: half-widths must be positive");
  if (!all_finite(center) || !all_finite(half_widths))
    throw InputError("box region: non-finite data");
}

BoxRegion BoxRegion::cube(Vec c, double hw) {
  const std::size_t n = c.size();
  return BoxRegion(std::move(c), Vec(n, hw));
}

BoxRegion BoxRegion::inflated(double extra) const {
  Vec hw = half_widths;
  for (double& w : hw) w += extra;
  return BoxRegion(center, std::move(hw));
}

std::vector<Vec> BoxRegion::corners() const {
  const int n = dim();
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vec p(n);
    for (int j = 0; j < n; ++j)
      p[j] = (mask >> j) & 1 ? hi(j) : lo(j);
    out.push_back(std::move(p));
  }
  return out;
}

double BoxRegion::axis_coord(int axis, int i, int grid_per_axis) const {
  if (grid_per_axis < 2) throw InputError("box grid: need at least two points per axis");
  const double t = static_cast<double>(i) / static_cast<double>(grid_per_axis - 1);
  return lo(axis) + t * (hi(axis) - lo(axis));
}

std::size_t BoxRegion::grid_size(int grid_per_axis) const {
  std::size_t total = 1;
  for (int j = 0; j < dim(); ++j) total *= static_cast<std::size_t>(grid_per_axis);
  return total;
}

Vec BoxRegion::grid_point(std::size_t flat_index, int grid_per_axis) const {
  Vec p(dim());
  for (int j = 0; j < dim(); ++j) {
    p[j] = axis_coord(j, static_cast<int>(flat_index % grid_per_axis), grid_per_axis);
    flat_index /= static_cast<std::size_t>(grid_per_axis);
  }
  return p;
}

namespace {

// Smallest eigenvalue of a small symmetric matrix via cyclic Jacobi.
double min_eigenvalue_sym(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::fabs(a[i][j]));
    if (off < 1e-13) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-15) continue;
        const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  double mn = a[0][0];
  for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a[i][i]);
  return mn;
}

}  // namespace

ConvexFunction ConvexFunction::max_affine(Matrix c, Vec d) {
  if (c.empty() || c.size() != d.size())
    throw InputError("max_affine: need at least one piece with matching offsets");
  const std::size_t n = c.front().size();
  if (n == 0) throw DimensionError("max_affine: zero-dimensional pieces");
  for (const auto& row : c) {
    if (row.size() != n) throw DimensionError("max_affine: inconsistent piece dimension");
    if (!all_finite(row)) throw InputError("max_affine: non-finite coefficient");
  }
  if (!all_finite(d)) throw InputError("max_affine: non-finite offset");
  ConvexFunction f;
  f.dim_ = static_cast<int>(n);
  f.body_ = MaxAffine{std::move(c), std::move(d)};
  return f;
}

ConvexFunction ConvexFunction::quadratic(Matrix Q, Vec q, double r) {
  const std::size_t n = q.size();
  if (n == 0 || Q.size() != n) throw DimensionError("quadratic: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (Q[i].size() != n) throw DimensionError("quadratic: Q must be square");
    if (!all_finite(Q[i])) throw InputError("quadratic: non-finite entry");
    for (std::size_t j = 0; j < n; ++j)
      if (std::fabs(Q[i][j] - Q[j][i]) > 1e-9)
        throw InputError("quadratic: Q must be symmetric");
  }
  if (min_eigenvalue_sym(Q) < -1e-9)
    throw InputError("quadratic: Q must be positive semidefinite");
  ConvexFunction f;
  f.dim_ = static_cast<int>(n);
  f.body_ = Quadratic{std::move(Q), std::move(q), r};
  return f;
}

ConvexFunction ConvexFunction::sum(std::vector<ConvexFunction> terms) {
  if (terms.empty()) throw InputError("sum: needs at least one term");
  const int n = terms.front().dim();
  for (const auto& t : terms)
    if (t.dim() != n) throw DimensionError("sum: member dimension mismatch");
  ConvexFunction f;
  f.dim_ = n;
  f.body_ = Sum{std::move(terms)};
  return f;
}

int ConvexFunction::depth() const {
  if (!is_sum()) return 1;
  int d = 0;
  for (const auto& t : as_sum().terms) d = std::max(d, t.depth());
  return d + 1;
}

double ConvexFunction::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw DimensionError("convex function: argument dimension mismatch");
  if (is_max_affine()) {
    const auto& ma = as_max_affine();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ma.c.size(); ++j)
      best = std::max(best, dot(ma.c[j], x) + ma.d[j]);
    return best;
  }
  if (is_quadratic()) {
    const auto& qd = as_quadratic();
    double s = qd.r + dot(qd.q, x);
    for (std::size_t i = 0; i < qd.Q.size(); ++i) s += 0.5 * x[i] * dot(qd.Q[i], x);
    return s;
  }
  double s = 0.0;
  for (const auto& t : as_sum().terms) s += t.value(x);
  return s;
}

std::pair<double, Vec> ConvexFunction::eval_subgrad(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw DimensionError("convex function: argument dimension mismatch");
  if (is_max_affine()) {
    const auto& ma = as_max_affine();
    std::size_t best = 0;
    double val = dot(ma.c[0], x) + ma.d[0];
    for (std::size_t j = 1; j < ma.c.size(); ++j) {
      const double v = dot(ma.c[j], x) + ma.d[j];
      if (v > val) {
        val = v;
        best = j;
      }
    }
    return {val, ma.c[best]};
  }
  if (is_quadratic()) {
    const auto& qd = as_quadratic();
    Vec g = qd.q;
    double s = qd.r + dot(qd.q, x);
    for (std::size_t i = 0; i < qd.Q.size(); ++i) {
      const double qi = dot(qd.Q[i], x);
      g[i] += qi;
      s += 0.5 * x[i] * qi;
    }
    return {s, std::move(g)};
  }
  double val = 0.0;
  Vec g(dim_, 0.0);
  for (const auto& t : as_sum().terms) {
    auto [v, sg] = t.eval_subgrad(x);
    val += v;
    axpy(1.0, sg, g);
  }
  return {val, std::move(g)};
}

namespace {

constexpr std::size_t kSumGeneratorCap = 10000;

void collect_generators(const ConvexFunction& f, std::span<const double> x,
                        const ToleranceConfig& tol, std::vector<Vec>& out) {
  if (f.is_max_affine()) {
    const auto& ma = f.as_max_affine();
    double fmax = -std::numeric_limits<double>::infinity();
    Vec vals(ma.c.size());
    for (std::size_t j = 0; j < ma.c.size(); ++j) {
      vals[j] = dot(ma.c[j], x) + ma.d[j];
      fmax = std::max(fmax, vals[j]);
    }
    for (std::size_t j = 0; j < ma.c.size(); ++j)
      if (fmax - vals[j] <= tol.active_tol) out.push_back(ma.c[j]);
    return;
  }
  if (f.is_quadratic()) {
    out.push_back(f.eval_subgrad(x).second);
    return;
  }
  // Minkowski sum of the member generator sets, truncated with dedup.
  std::vector<Vec> acc{Vec(x.size(), 0.0)};
  for (const auto& term : f.as_sum().terms) {
    std::vector<Vec> gens;
    collect_generators(term, x, tol, gens);
    std::vector<Vec> next;
    next.reserve(std::min(acc.size() * gens.size(), kSumGeneratorCap));
    for (const auto& a : acc) {
      for (const auto& g : gens) {
        Vec s = add(a, g);
        bool dup = false;
        for (const auto& q : next)
          if (q == s) {
            dup = true;
            break;
          }
        if (!dup) next.push_back(std::move(s));
        if (next.size() >= kSumGeneratorCap) break;
      }
      if (next.size() >= kSumGeneratorCap) break;
    }
    acc = std::move(next);
  }
  for (auto& g : acc) out.push_back(std::move(g));
}

}  // namespace

PointCloud subdiff_generators(const ConvexFunction& f, std::span<const double> x,
                              const ToleranceConfig& tol) {
  if (f.depth() > 4) throw InputError("subdiff_generators: sum nesting deeper than 4");
  std::vector<Vec> gens;
  collect_generators(f, x, tol, gens);
  return PointCloud(f.dim(), std::move(gens));
}

double sup_distance_on_box_serial(const ConvexFunction& f1, const ConvexFunction& f2,
                                  const BoxRegion& K, int grid_per_axis) {
  if (f1.dim() != f2.dim() || f1.dim() != K.dim())
    throw DimensionError("sup_distance_on_box: dimension mismatch");
  const std::size_t total = K.grid_size(grid_per_axis);
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const Vec z = K.grid_point(i, grid_per_axis);
    worst = std::max(worst, std::fabs(f1.value(z) - f2.value(z)));
  }
  return worst;
}

double sup_distance_on_box(const ConvexFunction& f1, const ConvexFunction& f2,
                           const BoxRegion& K, int grid_per_axis) {
  if (f1.dim() != f2.dim() || f1.dim() != K.dim())
    throw DimensionError("sup_distance_on_box: dimension mismatch");
  const long total = static_cast<long>(K.grid_size(grid_per_axis));
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long i = 0; i < total; ++i) {
    const Vec z = K.grid_point(static_cast<std::size_t>(i), grid_per_axis);
    worst = std::max(worst, std::fabs(f1.value(z) - f2.value(z)));
  }
  return worst;
}

PointCloud subdiff_image_serial(const ConvexFunction& f, const BoxRegion& K,
                                int grid_per_axis, const ToleranceConfig& tol) {
  if (f.dim() != K.dim()) throw DimensionError("subdiff_image: dimension mismatch");
  const std::size_t total = K.grid_size(grid_per_axis);
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < total; ++i)
    collect_generators(f, K.grid_point(i, grid_per_axis), tol, gens);
  return PointCloud(f.dim(), std::move(gens));
}

PointCloud subdiff_image(const ConvexFunction& f, const BoxRegion& K, int grid_per_axis,
                         const ToleranceConfig& tol) {
  if (f.dim() != K.dim()) throw DimensionError("subdiff_image: dimension mismatch");
  const long total = static_cast<long>(K.grid_size(grid_per_axis));
  std::vector<std::vector<Vec>> slots(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < total; ++i)
    collect_generators(f, K.grid_point(static_cast<std::size_t>(i), grid_per_axis), tol,
                       slots[static_cast<std::size_t>(i)]);
  // Merge in grid order so the result matches the serial pass exactly.
  std::vector<Vec> gens;
  for (auto& s : slots)
    for (auto& g : s) gens.push_back(std::move(g));
  return PointCloud(f.dim(), std::move(gens));
}

StabilityResult holder_stability_check(const ConvexFunction& f1, const ConvexFunction& f2,
                                       const Vec& x0, double alpha, double delta,
                                       const ToleranceConfig& tol, int grid_per_axis) {
  if (f1.dim() != f2.dim() || f1.dim() != static_cast<int>(x0.size()))
    throw DimensionError("holder_stability_check: dimension mismatch");
  if (!(alpha > 0.0)) throw PreconditionError("holder_stability_check: alpha must be positive");
  if (!(delta > 0.0) || delta > alpha * alpha + 1e-15)
    throw PreconditionError("holder_stability_check: need 0 < delta <= alpha^2");

  const double sq = std::sqrt(delta);
  const PointCloud A = subdiff_generators(f1, x0, tol);
  const PointCloud B = subdiff_image(f2, BoxRegion::cube(x0, sq), grid_per_axis, tol);
  const double eps = 4.0 * sq;
  const InclusionResult inc = inclusion_within(A, B, eps, NormSpec{Norm::l2}, tol);
  return {inc.holds, inc.worst, eps};
}

}  // namespace lipmod
