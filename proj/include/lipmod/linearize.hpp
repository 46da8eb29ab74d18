#pragma once

#include <string>

#include "lipmod/convexfn.hpp"
#include "lipmod/linsys.hpp"

namespace lipmod {

// A convex inequality f0(x) <= 0 fixed at a nominal feasible point, with the
// enlargement radii used to truncate its linearization. Euclidean norm
// throughout.
struct ConvexInstance {
  ConvexFunction f0;
  Vec x0;
  double alpha0 = 0.5;    // radius of the base enlargement of the sublevel set
  double alpha = 1.0;     // extra outer margin for the working region
  int grid_per_axis = 41;
};

// Exact polyhedral description of {x : f(x) <= 0} for a max of affine pieces.
Polyhedron sublevel_polyhedron(const ConvexFunction& f);

// Coefficient rows (a, a'z - f(z)) for subgradients a at grid points z of the
// region. For max-affine functions each row is the exact (c_j, -d_j) of a
// piece active somewhere on the grid.
PointCloud linearize_on_box(const ConvexFunction& f, const BoxRegion& region,
                            int grid_per_axis, const ToleranceConfig& tol = {});

// Bounding box of the sublevel set; throws when it is empty or unbounded.
BoxRegion sublevel_bounding_box(const ConvexFunction& f, const ToleranceConfig& tol = {});

// Checks the instance invariants: f0(x0) <= feas_tol and a bounded, nonempty
// sublevel set certified by f0 > 0 on the boundary of the sampling box.
void validate_instance(const ConvexInstance& inst, const ToleranceConfig& tol = {});

// Bounding box of the sublevel set inflated by alpha0 + extra.
BoxRegion enlargement_box(const ConvexInstance& inst, double extra = 0.0,
                          const ToleranceConfig& tol = {});

struct Kappa0Result {
  ExtReal kappa0;
  LinearSystem system;  // the linearization rows over the base enlargement
  ModulusReport report;
  BoxRegion region;
};

Kappa0Result compute_kappa0(const ConvexInstance& inst, const ToleranceConfig& tol = {});

struct SlaterResult {
  double margin = 0.0;  // grid minimum of f0; negative certifies a strict solution
  Vec witness;
};

SlaterResult slater_margin(const ConvexFunction& f0, const BoxRegion& search_box,
                           int grid_per_axis);

// m/4 where m is the minimum of f0 on the boundary of the sublevel set
// enlarged by alpha0/2. Exact in dimension one; dimension two uses an exact
// offset-polyline (max-affine) or a gradient-offset sampling (quadratic).
double safe_radius(const ConvexInstance& inst, const ToleranceConfig& tol = {},
                   int boundary_samples = 720);

struct GapBoundResult {
  double lhs = 0.0;        // Hausdorff gap of the two linearizations
  double rhs = 0.0;        // rho * image gap + value gap
  double rho = 0.0;        // max{1 + |x| : x in K1 union K2}
  double image_gap = 0.0;  // Hausdorff gap of the subdifferential images
  double value_gap = 0.0;  // sup |f1 - f2| over both boxes
  bool holds = false;
};

GapBoundResult gap_bound_check(const ConvexFunction& f1, const ConvexFunction& f2,
                               const BoxRegion& K1, const BoxRegion& K2, int grid_per_axis,
                               const ToleranceConfig& tol = {});

struct ConvexLipResult {
  double lhs = 0.0;  // d(x1, sublevel set of f2)
  double rhs = 0.0;  // kappa * (rho * image gap + value gap)
  double rho = 0.0;
  double image_gap = 0.0;
  double value_gap = 0.0;
  double delta_cap = 0.0;      // surrogate admissible delta
  double kappa0_value = 0.0;   // +inf reported as infinity()
  bool kappa0_infinite = false;
  bool holds = false;
  bool hypotheses_met = false;
  std::string hypothesis_note;
};

// Lipschitz-type estimate for perturbed convex inequalities: verifies
// d(x1, L(f2)) <= kappa * (rho * d_H(subdiff images) + d_E(f1, f2)) for
// perturbations within delta of the nominal function. gradient_only drops
// the sqrt(delta) image enlargement (differentiable nominal case).
ConvexLipResult convex_lipschitz_check(const ConvexInstance& inst, double kappa,
                                       const ConvexFunction& f1, const ConvexFunction& f2,
                                       const Vec& x1, double delta,
                                       const ToleranceConfig& tol = {},
                                       bool gradient_only = false,
                                       double stability_eps = 1.0);

// d(x, {f <= 0}) in the Euclidean norm. Exact polyhedral projection for
// max-affine f; projected subgradient descent with restarts otherwise.
double dist_to_sublevel(const ConvexFunction& f, const Vec& x,
                        const ToleranceConfig& tol = {});

}  // namespace lipmod
