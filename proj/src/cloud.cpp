#include <algorithm>
#include <cmath>
#include <limits>

#include "lipmod/hulls.hpp"

namespace lipmod {

PointCloud::PointCloud(int dim_, std::vector<Vec> pts) : dim(dim_) {
  if (dim <= 0) throw DimensionError("point cloud: dimension must be positive");
  if (pts.empty()) throw InputError("point cloud: empty");
  points.reserve(pts.size());
  for (auto& p : pts) {
    if (static_cast<int>(p.size()) != dim)
      throw DimensionError("point cloud: inconsistent point dimension");
    if (!all_finite(p)) throw InputError("point cloud: non-finite coordinate");
    bool dup = false;
    for (const auto& q : points)
      if (q == p) {
        dup = true;
        break;
      }
    if (!dup) points.push_back(std::move(p));
  }
}

PointCloud PointCloud::single(Vec p) {
  const int d = static_cast<int>(p.size());
  std::vector<Vec> pts;
  pts.push_back(std::move(p));
  return PointCloud(d, std::move(pts));
}

bool PointCloud::contains(std::span<const double> p) const {
  for (const auto& q : points)
    if (std::equal(q.begin(), q.end(), p.begin(), p.end())) return true;
  return false;
}

namespace {

void check_same_dim(const PointCloud& A, const PointCloud& B) {
  if (A.dim != B.dim) throw DimensionError("cloud pair: dimension mismatch");
}

double nearest_distance(std::span<const double> t, const PointCloud& U, const Metric& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : U.points) best = std::min(best, m.distance(t, q));
  return best;
}

}  // namespace

double excess_serial(const PointCloud& A, const PointCloud& B, const Metric& m) {
  check_same_dim(A, B);
  double worst = 0.0;
  for (const auto& p : A.points) worst = std::max(worst, nearest_distance(p, B, m));
  return worst;
}

double excess(const PointCloud& A, const PointCloud& B, const Metric& m) {
  check_same_dim(A, B);
  const long count = static_cast<long>(A.points.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long i = 0; i < count; ++i)
    worst = std::max(worst, nearest_distance(A.points[static_cast<std::size_t>(i)], B, m));
  return worst;
}

double hausdorff_serial(const PointCloud& A, const PointCloud& B, const Metric& m) {
  return std::max(excess_serial(A, B, m), excess_serial(B, A, m));
}

double hausdorff(const PointCloud& A, const PointCloud& B, const Metric& m) {
  return std::max(excess(A, B, m), excess(B, A, m));
}

double dist_to_cloud(std::span<const double> t, const PointCloud& U, const Metric& m) {
  if (static_cast<int>(t.size()) != U.dim)
    throw DimensionError("dist_to_cloud: dimension mismatch");
  return nearest_distance(t, U, m);
}

Vec project_to_cloud(std::span<const double> t, const PointCloud& U, const Metric& m) {
  if (static_cast<int>(t.size()) != U.dim)
    throw DimensionError("project_to_cloud: dimension mismatch");
  const Vec* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& q : U.points) {
    const double d = m.distance(t, q);
    if (best == nullptr || d < best_dist || (d == best_dist && lex_less(q, *best))) {
      best = &q;
      best_dist = d;
    }
  }
  return *best;
}

}  // namespace lipmod
