#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipmod/norms.hpp"
#include "lipmod/vec.hpp"

namespace lipmod {

struct ToleranceConfig {
  double feas_tol = 1e-9;    // constraint violation threshold
  double active_tol = 1e-7;  // activity threshold
  double solver_tol = 1e-10; // solver convergence
  int max_iter = 100000;
};

// Finite set of points sharing one dimension. Duplicates are removed on
// construction (exact equality) and every coordinate must be finite.
struct PointCloud {
  int dim = 0;
  std::vector<Vec> points;

  PointCloud() = default;
  PointCloud(int dim_, std::vector<Vec> pts);

  static PointCloud single(Vec p);
  std::size_t size() const { return points.size(); }
  bool contains(std::span<const double> p) const;  // exact membership
};

struct Halfspace {
  Vec a;
  double b = 0.0;  // a'x <= b
};

struct Polyhedron {
  int n = 0;
  std::vector<Halfspace> rows;  // empty rows list means the whole space
};

// Excess of A over B: max over p in A of the distance from p to B.
// The OpenMP kernel and the serial reference produce identical doubles.
double excess(const PointCloud& A, const PointCloud& B, const Metric& m);
double excess_serial(const PointCloud& A, const PointCloud& B, const Metric& m);

double hausdorff(const PointCloud& A, const PointCloud& B, const Metric& m);
double hausdorff_serial(const PointCloud& A, const PointCloud& B, const Metric& m);

double dist_to_cloud(std::span<const double> t, const PointCloud& U, const Metric& m);

// Nearest point of U; ties broken by the lexicographically smallest minimizer.
Vec project_to_cloud(std::span<const double> t, const PointCloud& U, const Metric& m);

enum class LpSense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

struct LpBox {
  Vec lo, hi;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double value = 0.0;
};

// Dense two-phase primal simplex with Bland's rule. Variables are free;
// bounds, if given, are folded in as ordinary rows.
LpResult solve_lp(const Vec& objective, LpSense sense, const Polyhedron& constraints,
                  const std::optional<LpBox>& bounds = std::nullopt,
                  const ToleranceConfig& tol = {});

struct MinNormResult {
  Vec point;    // attaining point in conv(generators)
  double dist;  // its dual norm
  Vec weights;  // convex weights over the (deduplicated) generators
};

// min{ ||u||_* : u in conv(generators) }. Euclidean case runs Wolfe's
// nearest-point method; the polyhedral norms reduce to a linear program.
MinNormResult min_norm_point(const PointCloud& generators, NormSpec spec,
                             const ToleranceConfig& tol = {});

struct ProjectionResult {
  Vec point;
  double dist;
};

// Nearest point of the polyhedron in the primal norm. Euclidean case uses
// Hildreth's dual coordinate ascent with an active-set polish; l1/linf go
// through an epigraph LP.
ProjectionResult project_polyhedron(const Vec& x, const Polyhedron& P, NormSpec spec,
                                    const ToleranceConfig& tol = {});

struct InclusionResult {
  bool holds;
  double worst;  // max over a in A of d_*(a, conv(Bgen))
};

// Checks A subset of conv(Bgen) + eps * (dual unit ball).
InclusionResult inclusion_within(const PointCloud& A, const PointCloud& Bgen, double eps,
                                 NormSpec spec, const ToleranceConfig& tol = {});

bool polyhedron_feasible(const Polyhedron& P, const ToleranceConfig& tol = {});

// Vertices of a bounded polyhedron in dimension 1 or 2 (unordered).
std::vector<Vec> polyhedron_vertices(const Polyhedron& P, const ToleranceConfig& tol = {});

}  // namespace lipmod
