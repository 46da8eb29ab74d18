#pragma once

#include <cstdint>
#include <vector>

#include "lipmod/linsys.hpp"
#include "lipmod/rng.hpp"

namespace lipmod {

enum class PerturbKind { jitter, add_point, drop_point };

struct SweepConfig {
  std::vector<double> deltas;  // strictly decreasing
  int samples_per_delta = 1000;
  std::uint64_t seed = 0;
  std::vector<PerturbKind> kinds{PerturbKind::jitter, PerturbKind::add_point,
                                 PerturbKind::drop_point};
};

enum class SweepMode { lipschitz, calmness };

struct DeltaStats {
  double delta = 0.0;
  double max_ratio = 0.0;
  int samples_used = 0;
  int discarded = 0;
};

struct SweepResult {
  double estimate = 0.0;  // max ratio at the smallest delta
  std::vector<DeltaStats> per_delta;
  bool diverging = false;
};

// Random cloud within Hausdorff distance delta of U0: per-point jitter in
// the coefficient-norm ball, a duplicated-and-moved point, or a drop that
// keeps the removed point covered. The bound is re-verified on every call.
PointCloud perturb_cloud(const PointCloud& U0, double delta, SplitMix64& rng,
                         const std::vector<PerturbKind>& kinds, NormSpec spec);

// Sampled lower estimate of the modulus: draws perturbed pairs at each
// delta, measures displacement-to-perturbation ratios, and injects a
// deterministic worst-case tilt of every active row so the estimate is a
// certified lower bound. Calmness mode pins the second cloud at U0.
SweepResult empirical_modulus(const LinearSystem& sys0, const Vec& x0, const SweepConfig& cfg,
                              const ToleranceConfig& tol = {},
                              SweepMode mode = SweepMode::lipschitz);
SweepResult empirical_modulus_serial(const LinearSystem& sys0, const Vec& x0,
                                     const SweepConfig& cfg, const ToleranceConfig& tol = {},
                                     SweepMode mode = SweepMode::lipschitz);

}  // namespace lipmod
