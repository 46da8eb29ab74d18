#include "lipmod/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipmod {

namespace {

// Random vector with coefficient norm at most radius: rejection-sample the
// dual-norm ball on the gradient part, uniform interval on the offset.
Vec coeff_ball_sample(int dim, double radius, NormSpec spec, SplitMix64& rng) {
  const int n = dim - 1;
  Vec v(dim, 0.0);
  const Norm dual = spec.dual().p;
  for (int tries = 0; tries < 1000; ++tries) {
    for (int j = 0; j < n; ++j) v[j] = rng.uniform(-1.0, 1.0);
    const double len = norm_value(std::span<const double>(v.data(), n), spec, NormMode::dual);
    if (dual == Norm::linf || len <= 1.0) break;
    if (tries == 999)
      for (int j = 0; j < n; ++j) v[j] /= std::max(len, 1.0);
  }
  v[n] = rng.uniform(-1.0, 1.0);
  const double u = rng.uniform();
  for (double& c : v) c *= radius * u;
  return v;
}

Vec primal_ball_sample(int n, double radius, NormSpec spec, SplitMix64& rng) {
  Vec v(n, 0.0);
  for (int tries = 0; tries < 1000; ++tries) {
    for (int j = 0; j < n; ++j) v[j] = rng.uniform(-1.0, 1.0);
    const double len = norm_value(v, spec, NormMode::primal);
    if (len <= 1.0) break;
    if (tries == 999)
      for (double& c : v) c /= std::max(len, 1.0);
  }
  const double u = rng.uniform();
  for (double& c : v) c *= radius * u;
  return v;
}

// Direction g with ||g||_* <= 1 and g'x = ||x|| (a dual-norm unit vector
// aligned with x); zero when x vanishes.
Vec dual_align(const Vec& x, NormSpec spec) {
  const int n = static_cast<int>(x.size());
  Vec g(n, 0.0);
  switch (spec.p) {
    case Norm::l2: {
      const double len = norm_value(x, spec, NormMode::primal);
      if (len > 0.0)
        for (int j = 0; j < n; ++j) g[j] = x[j] / len;
      break;
    }
    case Norm::l1:
      for (int j = 0; j < n; ++j) g[j] = x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0);
      break;
    case Norm::linf: {
      int arg = 0;
      for (int j = 1; j < n; ++j)
        if (std::fabs(x[j]) > std::fabs(x[arg])) arg = j;
      if (x[arg] != 0.0) g[arg] = x[arg] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return g;
}

struct SampleOutcome {
  double ratio = -1.0;         // pair ratio, negative when discarded
  double pinned_ratio = -1.0;  // ratio against the nominal cloud
};

double feasible_ratio(const Vec& x1, const PointCloud& U2, const LinearSystem& sys0,
                      const PointCloud& U1, const ToleranceConfig& tol) {
  const LinearSystem sys2(sys0.n, U2, sys0.spec);
  const Metric coeff{sys0.spec, MetricSpace::coeff};
  const double h = hausdorff(U1, U2, coeff);
  if (h < 1e-12) return -1.0;  // 0/0 convention: skip
  const double num = dist_to_feasible(x1, sys2, tol);
  return num / h;
}

SampleOutcome evaluate_sample(const LinearSystem& sys0, const Vec& x0, double delta,
                              std::uint64_t stream_seed, const SweepConfig& cfg,
                              const ToleranceConfig& tol, SweepMode mode) {
  SplitMix64 rng(stream_seed);
  SampleOutcome out;
  try {
    const PointCloud U1 = perturb_cloud(sys0.coeffs, delta, rng, cfg.kinds, sys0.spec);
    const Vec jitter = primal_ball_sample(sys0.n, delta, sys0.spec, rng);
    const PointCloud U2 = mode == SweepMode::lipschitz
                              ? perturb_cloud(sys0.coeffs, delta, rng, cfg.kinds, sys0.spec)
                              : sys0.coeffs;

    const LinearSystem sys1(sys0.n, U1, sys0.spec);
    Vec xj = x0;
    axpy(1.0, jitter, xj);
    const Vec x1 = project_polyhedron(xj, sys1.polyhedron(), sys0.spec, tol).point;
    if (norm_value(sub(x1, x0), sys0.spec, NormMode::primal) > delta + 1e-12) return out;

    if (mode == SweepMode::lipschitz) {
      out.ratio = feasible_ratio(x1, U2, sys0, U1, tol);
      out.pinned_ratio = feasible_ratio(x1, sys0.coeffs, sys0, U1, tol);
    } else {
      out.ratio = feasible_ratio(x1, sys0.coeffs, sys0, U1, tol);
    }
  } catch (const Error&) {
    // infeasible or degenerate draw: discarded
  }
  return out;
}

// Worst-case tilt of one active row: push the gradient along the dual
// alignment of x0 and pull the offset down, a perturbation of coefficient
// norm exactly delta that moves the feasible boundary as fast as possible.
std::vector<double> adversarial_ratios(const LinearSystem& sys0, const Vec& x0, double delta,
                                       const ToleranceConfig& tol, SweepMode mode) {
  std::vector<double> ratios;
  std::vector<int> active;
  try {
    active = active_set(x0, sys0, tol);
  } catch (const PreconditionError&) {
    return ratios;
  }
  const Vec g = dual_align(x0, sys0.spec);
  for (int idx : active) {
    const std::size_t i = static_cast<std::size_t>(idx);
    std::vector<Vec> tight_rows = sys0.coeffs.points;
    Vec moved = tight_rows[i];
    for (int j = 0; j < sys0.n; ++j) moved[j] += delta * g[j];
    moved[sys0.n] -= delta;
    tight_rows[i] = std::move(moved);

    try {
      if (mode == SweepMode::lipschitz) {
        // Pair (U0, tightened): the nominal point itself is displaced.
        const PointCloud U2(sys0.n + 1, tight_rows);
        const double r = feasible_ratio(x0, U2, sys0, sys0.coeffs, tol);
        if (r >= 0.0) ratios.push_back(r);
      } else {
        // Calmness: loosen instead, walk x1 outward, measure against U0.
        std::vector<Vec> loose_rows = sys0.coeffs.points;
        Vec relaxed = loose_rows[i];
        for (int j = 0; j < sys0.n; ++j) relaxed[j] -= delta * g[j];
        relaxed[sys0.n] += delta;
        loose_rows[i] = std::move(relaxed);
        const PointCloud U1(sys0.n + 1, loose_rows);
        const LinearSystem sys1(sys0.n, U1, sys0.spec);
        Vec target = x0;
        const Vec a = sys0.gradient(i);
        const double an = norm_value(a, sys0.spec, NormMode::primal);
        if (an > 0.0) axpy(delta / an, a, target);
        Vec x1 = project_polyhedron(target, sys1.polyhedron(), sys0.spec, tol).point;
        if (norm_value(sub(x1, x0), sys0.spec, NormMode::primal) <= delta + 1e-12) {
          const double r = feasible_ratio(x1, sys0.coeffs, sys0, U1, tol);
          if (r >= 0.0) ratios.push_back(r);
        }
      }
    } catch (const Error&) {
      // skip degenerate tilts
    }
  }
  return ratios;
}

SweepResult run_sweep(const LinearSystem& sys0, const Vec& x0, const SweepConfig& cfg,
                      const ToleranceConfig& tol, SweepMode mode, bool parallel) {
  if (cfg.deltas.empty()) throw InputError("sweep: need at least one delta");
  for (std::size_t i = 0; i + 1 < cfg.deltas.size(); ++i)
    if (!(cfg.deltas[i] > cfg.deltas[i + 1]))
      throw InputError("sweep: deltas must be strictly decreasing");
  if (cfg.samples_per_delta < 1) throw InputError("sweep: samples_per_delta must be >= 1");
  if (cfg.kinds.empty()) throw InputError("sweep: no perturbation kinds selected");

  SweepResult result;
  for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
    const double delta = cfg.deltas[di];
    const int S = cfg.samples_per_delta;
    std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(S));

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (long s = 0; s < S; ++s) {
        const std::uint64_t stream =
            substream(cfg.seed, di * static_cast<std::uint64_t>(S) + static_cast<std::uint64_t>(s));
        outcomes[static_cast<std::size_t>(s)] =
            evaluate_sample(sys0, x0, delta, stream, cfg, tol, mode);
      }
    } else {
      for (long s = 0; s < S; ++s) {
        const std::uint64_t stream =
            substream(cfg.seed, di * static_cast<std::uint64_t>(S) + static_cast<std::uint64_t>(s));
        outcomes[static_cast<std::size_t>(s)] =
            evaluate_sample(sys0, x0, delta, stream, cfg, tol, mode);
      }
    }

    DeltaStats stats;
    stats.delta = delta;
    for (const auto& o : outcomes) {
      bool used = false;
      if (o.ratio >= 0.0) {
        stats.max_ratio = std::max(stats.max_ratio, o.ratio);
        used = true;
      }
      if (o.pinned_ratio >= 0.0) {
        stats.max_ratio = std::max(stats.max_ratio, o.pinned_ratio);
        used = true;
      }
      if (used)
        ++stats.samples_used;
      else
        ++stats.discarded;
    }
    for (double r : adversarial_ratios(sys0, x0, delta, tol, mode)) {
      stats.max_ratio = std::max(stats.max_ratio, r);
      ++stats.samples_used;
    }
    result.per_delta.push_back(stats);
  }

  result.estimate = result.per_delta.back().max_ratio;
  bool growing = result.per_delta.size() > 1;
  for (std::size_t i = 0; i + 1 < result.per_delta.size(); ++i)
    if (result.per_delta[i + 1].max_ratio <= result.per_delta[i].max_ratio * 1.5)
      growing = false;
  result.diverging = growing && result.estimate > 100.0;
  return result;
}

}  // namespace

PointCloud perturb_cloud(const PointCloud& U0, double delta, SplitMix64& rng,
                         const std::vector<PerturbKind>& kinds, NormSpec spec) {
  if (delta < 0.0) throw InputError("perturb_cloud: delta must be nonnegative");
  if (delta == 0.0) return U0;
  if (kinds.empty()) throw InputError("perturb_cloud: no kinds");
  const Metric coeff{spec, MetricSpace::coeff};
  const PerturbKind kind = kinds[static_cast<std::size_t>(rng.uniform_int(
      static_cast<int>(kinds.size())))];

  std::vector<Vec> pts = U0.points;
  switch (kind) {
    case PerturbKind::jitter:
      for (auto& p : pts) {
        const Vec step = coeff_ball_sample(U0.dim, delta, spec, rng);
        axpy(1.0, step, p);
      }
      break;
    case PerturbKind::add_point: {
      const std::size_t i =
          static_cast<std::size_t>(rng.uniform_int(static_cast<int>(pts.size())));
      Vec extra = pts[i];
      const Vec step = coeff_ball_sample(U0.dim, delta, spec, rng);
      axpy(1.0, step, extra);
      pts.push_back(std::move(extra));
      break;
    }
    case PerturbKind::drop_point: {
      if (pts.size() > 1) {
        const std::size_t i =
            static_cast<std::size_t>(rng.uniform_int(static_cast<int>(pts.size())));
        std::vector<Vec> rest;
        for (std::size_t k = 0; k < pts.size(); ++k)
          if (k != i) rest.push_back(pts[k]);
        const PointCloud remainder(U0.dim, rest);
        if (dist_to_cloud(pts[i], remainder, coeff) <= delta) pts = std::move(rest);
        // otherwise the drop would break the bound: skip it
      }
      break;
    }
  }

  PointCloud out(U0.dim, std::move(pts));
  const double check = hausdorff(out, U0, coeff);
  if (check > delta + 1e-12)
    throw Error("perturb_cloud: internal bound violated");  // construction guarantees this
  return out;
}

SweepResult empirical_modulus(const LinearSystem& sys0, const Vec& x0, const SweepConfig& cfg,
                              const ToleranceConfig& tol, SweepMode mode) {
  return run_sweep(sys0, x0, cfg, tol, mode, true);
}

SweepResult empirical_modulus_serial(const LinearSystem& sys0, const Vec& x0,
                                     const SweepConfig& cfg, const ToleranceConfig& tol,
                                     SweepMode mode) {
  return run_sweep(sys0, x0, cfg, tol, mode, false);
}

}  // namespace lipmod
