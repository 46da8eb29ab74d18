#pragma once

#include <utility>

#include "lipmod/hulls.hpp"

namespace lipmod {

// A finite evaluation of a coefficient-indexed family: value(t) for each t
// in the sampled index set. Values always land inside the indexed cloud.
struct IndexedFamily {
  PointCloud index_sample;
  std::vector<Vec> values;
};

// sigma0: plain metric projection onto U0 at every index.
IndexedFamily projection_family(const PointCloud& U0, const PointCloud& sample, NormSpec spec);

// t for t in U, else the composite projection P_U(P_U0(t)).
IndexedFamily calmness_indexation(const PointCloud& U, const PointCloud& U0,
                                  const PointCloud& sample, NormSpec spec);

// Distance-preserving pair: (P1(t), P2(t)) on U1 union U2, and
// (P1 P0(t), P2 P1 P0(t)) elsewhere. Requires the sample to contain
// U1 union U2.
std::pair<IndexedFamily, IndexedFamily> pair_indexation(const PointCloud& U1,
                                                        const PointCloud& U2,
                                                        const PointCloud& U0,
                                                        const PointCloud& sample,
                                                        NormSpec spec);

// Chebyshev distance between two families sharing an index sample.
double sup_distance(const IndexedFamily& F1, const IndexedFamily& F2, NormSpec spec);

// Cloud of values taken by the family (its range).
PointCloud range_cloud(const IndexedFamily& F);

}  // namespace lipmod
