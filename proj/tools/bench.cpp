// Compares the OpenMP kernels against their serial references on sized-up
// inputs and verifies both give identical results.

#include <chrono>
#include <cstdio>
#include <vector>

#include "lipmod/convexfn.hpp"
#include "lipmod/estimate.hpp"
#include "lipmod/hulls.hpp"
#include "lipmod/parallel.hpp"
#include "lipmod/rng.hpp"

using namespace lipmod;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PointCloud random_cloud(int dim, int count, SplitMix64& rng) {
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec p(dim);
    for (double& c : p) c = rng.uniform(-5.0, 5.0);
    pts.push_back(std::move(p));
  }
  return PointCloud(dim, std::move(pts));
}

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-24s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial,
              parallel, serial / parallel, equal ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  apply_thread_cap_from_env();
  std::printf("threads: %d\n", max_threads());

  SplitMix64 rng(20240915);

  {
    const PointCloud A = random_cloud(4, 3000, rng);
    const PointCloud B = random_cloud(4, 3000, rng);
    const Metric m{NormSpec{Norm::l2}, MetricSpace::coeff};
    auto t0 = Clock::now();
    const double ds = hausdorff_serial(A, B, m);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const double dp = hausdorff(A, B, m);
    const double tp = seconds_since(t0);
    report("hausdorff 2x3000", ts, tp, ds == dp);
  }

  {
    const ConvexFunction f1 = ConvexFunction::max_affine({{1.0, 0.3}, {-1.0, 0.2}, {0.4, -1.0}},
                                                         {-1.0, -0.9, -0.2});
    const ConvexFunction f2 = ConvexFunction::max_affine({{0.9, 0.4}, {-1.1, 0.1}, {0.5, -0.9}},
                                                         {-1.1, -0.8, -0.3});
    const BoxRegion K = BoxRegion::cube({0.0, 0.0}, 3.0);
    auto t0 = Clock::now();
    const double vs = sup_distance_on_box_serial(f1, f2, K, 1501);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const double vp = sup_distance_on_box(f1, f2, K, 1501);
    const double tp = seconds_since(t0);
    report("value gap 1501^2 grid", ts, tp, vs == vp);
  }

  {
    const LinearSystem sys(1, PointCloud(2, {{1.0, 1.0}}), NormSpec{Norm::l2});
    SweepConfig cfg;
    cfg.deltas = {1e-2};
    cfg.samples_per_delta = 20000;
    cfg.seed = 42;
    auto t0 = Clock::now();
    const SweepResult rs = empirical_modulus_serial(sys, {1.0}, cfg);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const SweepResult rp = empirical_modulus(sys, {1.0}, cfg);
    const double tp = seconds_since(t0);
    report("sweep 20000 samples", ts, tp, rs.estimate == rp.estimate);
  }

  return 0;
}
