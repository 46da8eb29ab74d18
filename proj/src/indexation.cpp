#include "lipmod/indexation.hpp"

#include <algorithm>

namespace lipmod {

namespace {

Metric coeff_metric(NormSpec spec) { return Metric{spec, MetricSpace::coeff}; }

void check_dims(const PointCloud& a, const PointCloud& b) {
  if (a.dim != b.dim) throw DimensionError("indexation: dimension mismatch");
}

}  // namespace

IndexedFamily projection_family(const PointCloud& U0, const PointCloud& sample, NormSpec spec) {
  check_dims(U0, sample);
  const Metric m = coeff_metric(spec);
  IndexedFamily F{sample, {}};
  F.values.reserve(sample.size());
  for (const auto& t : sample.points) F.values.push_back(project_to_cloud(t, U0, m));
  return F;
}

IndexedFamily calmness_indexation(const PointCloud& U, const PointCloud& U0,
                                  const PointCloud& sample, NormSpec spec) {
  check_dims(U, U0);
  check_dims(U, sample);
  const Metric m = coeff_metric(spec);
  IndexedFamily F{sample, {}};
  F.values.reserve(sample.size());
  for (const auto& t : sample.points) {
    if (U.contains(t))
      F.values.push_back(t);
    else
      F.values.push_back(project_to_cloud(project_to_cloud(t, U0, m), U, m));
  }
  return F;
}

std::pair<IndexedFamily, IndexedFamily> pair_indexation(const PointCloud& U1,
                                                        const PointCloud& U2,
                                                        const PointCloud& U0,
                                                        const PointCloud& sample,
                                                        NormSpec spec) {
  check_dims(U1, U2);
  check_dims(U1, U0);
  check_dims(U1, sample);
  for (const auto& p : U1.points)
    if (!sample.contains(p))
      throw PreconditionError("pair_indexation: sample must contain U1");
  for (const auto& p : U2.points)
    if (!sample.contains(p))
      throw PreconditionError("pair_indexation: sample must contain U2");

  const Metric m = coeff_metric(spec);
  IndexedFamily F1{sample, {}};
  IndexedFamily F2{sample, {}};
  F1.values.reserve(sample.size());
  F2.values.reserve(sample.size());
  for (const auto& t : sample.points) {
    if (U1.contains(t) || U2.contains(t)) {
      F1.values.push_back(project_to_cloud(t, U1, m));
      F2.values.push_back(project_to_cloud(t, U2, m));
    } else {
      Vec p10 = project_to_cloud(project_to_cloud(t, U0, m), U1, m);
      F2.values.push_back(project_to_cloud(p10, U2, m));
      F1.values.push_back(std::move(p10));
    }
  }
  return {std::move(F1), std::move(F2)};
}

double sup_distance(const IndexedFamily& F1, const IndexedFamily& F2, NormSpec spec) {
  if (F1.index_sample.dim != F2.index_sample.dim ||
      F1.index_sample.points != F2.index_sample.points)
    throw InputError("sup_distance: families indexed by different samples");
  const Metric m = coeff_metric(spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < F1.values.size(); ++i)
    worst = std::max(worst, m.distance(F1.values[i], F2.values[i]));
  return worst;
}

PointCloud range_cloud(const IndexedFamily& F) {
  return PointCloud(F.index_sample.dim, F.values);
}

}  // namespace lipmod
