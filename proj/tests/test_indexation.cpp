#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lipmod/indexation.hpp"

using namespace lipmod;
using namespace lipmod::testing;

namespace {

// Index sample: the union of the given clouds plus seeded exterior points
// from a box twice the data's bounding box.
PointCloud build_sample(const std::vector<const PointCloud*>& clouds, int exterior,
                        SplitMix64& rng) {
  std::vector<Vec> pts;
  for (const auto* c : clouds)
    for (const auto& p : c->points) pts.push_back(p);
  Vec lo = pts.front(), hi = pts.front();
  for (const auto& p : pts)
    for (std::size_t k = 0; k < p.size(); ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  for (int s = 0; s < exterior; ++s) {
    Vec p(lo.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double c = 0.5 * (lo[k] + hi[k]);
      const double w = std::max(hi[k] - lo[k], 1.0);
      p[k] = c + rng.uniform(-w, w);
    }
    pts.push_back(std::move(p));
  }
  return PointCloud(clouds.front()->dim, std::move(pts));
}

}  // namespace

TEST_SUITE("indexation") {

TEST_CASE("calmness indexation branches") {
  const NormSpec spec{Norm::l2};
  const PointCloud U(2, {{1.0, 0.0}});
  const PointCloud U0(2, {{0.0, 0.0}});
  const PointCloud sample(2, {{1.0, 0.0}, {5.0, 5.0}, {0.0, 0.0}});
  const IndexedFamily F = calmness_indexation(U, U0, sample, spec);
  CHECK(F.values[0] == Vec{1.0, 0.0});  // member: identity branch
  CHECK(F.values[1] == Vec{1.0, 0.0});  // exterior: composite projection
  CHECK(F.values[2] == Vec{1.0, 0.0});  // P_U0 first, then P_U

  const PointCloud same(2, {{0.0, 0.0}});
  const IndexedFamily G = calmness_indexation(same, same, sample, spec);
  CHECK(G.values[1] == Vec{0.0, 0.0});
}

TEST_CASE("pair indexation example") {
  const NormSpec spec{Norm::l2};
  const PointCloud U0(2, {{0.0, 0.0}});
  const PointCloud U1(2, {{1.0, 0.0}});
  const PointCloud U2(2, {{0.0, 1.0}});
  SplitMix64 rng(3);
  const PointCloud sample = build_sample({&U1, &U2, &U0}, 5, rng);
  const auto [s1, s2] = pair_indexation(U1, U2, U0, sample, spec);
  const double d = sup_distance(s1, s2, spec);
  const Metric m{spec, MetricSpace::coeff};
  CHECK(d == doctest::Approx(1.0));
  CHECK(d == hausdorff(U1, U2, m));
}

TEST_CASE("pair indexation degenerate cases") {
  const NormSpec spec{Norm::l2};
  SplitMix64 rng(5);
  const PointCloud U = random_cloud(3, 4, rng);
  const PointCloud U0 = random_cloud(3, 3, rng);
  const PointCloud sample = build_sample({&U, &U0}, 10, rng);
  const auto [s1, s2] = pair_indexation(U, U, U0, sample, spec);
  CHECK(sup_distance(s1, s2, spec) == 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (U.contains(sample.points[i])) {
      CHECK(s1.values[i] == sample.points[i]);
      CHECK(s2.values[i] == sample.points[i]);
    }
  }
}

TEST_CASE("pair indexation requires the sample to cover both clouds") {
  const NormSpec spec{Norm::l2};
  const PointCloud U1(1, {{0.0}});
  const PointCloud U2(1, {{1.0}});
  const PointCloud sample(1, {{0.0}});
  CHECK_THROWS_AS(pair_indexation(U1, U2, U1, sample, spec), PreconditionError);
}

TEST_CASE("sup_distance basics") {
  const NormSpec spec{Norm::l2};
  const PointCloud sample(2, {{0.0, 0.0}});
  IndexedFamily F{sample, {{0.0, 0.0}}};
  IndexedFamily G{sample, {{1.0, 2.0}}};
  CHECK(sup_distance(F, F, spec) == 0.0);
  CHECK(sup_distance(F, G, spec) == doctest::Approx(2.0));
  IndexedFamily H{PointCloud(2, {{3.0, 3.0}}), {{0.0, 0.0}}};
  CHECK_THROWS_AS(sup_distance(F, H, spec), InputError);
}

TEST_CASE("pair identity and triple bound on random triples") {
  SplitMix64 rng(71);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 + rng.uniform_int(2);
    const NormSpec spec{static_cast<Norm>(rng.uniform_int(3))};
    const Metric m{spec, MetricSpace::coeff};
    const PointCloud U0 = random_cloud(dim, 1 + rng.uniform_int(5), rng);
    const PointCloud U1 = random_cloud(dim, 1 + rng.uniform_int(5), rng);
    const PointCloud U2 = random_cloud(dim, 1 + rng.uniform_int(5), rng);
    const PointCloud sample = build_sample({&U0, &U1, &U2}, 20, rng);

    const auto [s1, s2] = pair_indexation(U1, U2, U0, sample, spec);
    const double d_inf = sup_distance(s1, s2, spec);
    const double d_h = hausdorff(U1, U2, m);
    CHECK(std::fabs(d_inf - d_h) <= 1e-12);

    // The sup is attained on the union of the two clouds: exterior indices
    // never exceed the on-cloud maximum.
    double on_cloud = 0.0, exterior = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double v = m.distance(s1.values[i], s2.values[i]);
      if (U1.contains(sample.points[i]) || U2.contains(sample.points[i]))
        on_cloud = std::max(on_cloud, v);
      else
        exterior = std::max(exterior, v);
    }
    CHECK(exterior <= on_cloud + 1e-12);

    const IndexedFamily s0 = projection_family(U0, sample, spec);
    const double bound = 3.0 * std::max(hausdorff(U1, U0, m), hausdorff(U2, U0, m));
    CHECK(sup_distance(s1, s0, spec) <= bound + 1e-12);
    CHECK(sup_distance(s2, s0, spec) <= bound + 1e-12);

    // Ranges reproduce the clouds when the sample covers them.
    CHECK(hausdorff(range_cloud(s1), U1, m) == 0.0);
    CHECK(hausdorff(range_cloud(s2), U2, m) == 0.0);

    // Hausdorff distance of the ranges never exceeds the sup distance.
    CHECK(hausdorff(range_cloud(s1), range_cloud(s2), m) <= d_inf + 1e-12);
  }
}

TEST_CASE("calmness identity on random pairs") {
  SplitMix64 rng(73);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 + rng.uniform_int(2);
    const NormSpec spec{static_cast<Norm>(rng.uniform_int(3))};
    const Metric m{spec, MetricSpace::coeff};
    const PointCloud U0 = random_cloud(dim, 1 + rng.uniform_int(5), rng);
    const PointCloud U = random_cloud(dim, 1 + rng.uniform_int(5), rng);
    const PointCloud sample = build_sample({&U0, &U}, 20, rng);
    const IndexedFamily IU = calmness_indexation(U, U0, sample, spec);
    const IndexedFamily IU0 = calmness_indexation(U0, U0, sample, spec);
    CHECK(std::fabs(sup_distance(IU, IU0, spec) - hausdorff(U, U0, m)) <= 1e-12);
    // The nominal indexation is the plain projection family.
    const IndexedFamily P0 = projection_family(U0, sample, spec);
    CHECK(sup_distance(IU0, P0, spec) == 0.0);
  }
}

}  // TEST_SUITE
