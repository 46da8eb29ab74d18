#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "lipmod/hulls.hpp"

namespace lipmod {

// Axis-aligned compact box given by center and positive half-widths.
// Euclidean balls are outer-approximated by boxes of the same half-width
// wherever a ball enlargement is called for; checks built on such boxes are
// conservative in the enlargement direction.
struct BoxRegion {
  Vec center;
  Vec half_widths;

  BoxRegion(Vec c, Vec hw);
  static BoxRegion cube(Vec c, double hw);

  int dim() const { return static_cast<int>(center.size()); }
  double lo(int axis) const { return center[axis] - half_widths[axis]; }
  double hi(int axis) const { return center[axis] + half_widths[axis]; }
  BoxRegion inflated(double extra) const;
  std::vector<Vec> corners() const;

  // Uniform per-axis grid including the endpoints; grid_per_axis >= 2.
  double axis_coord(int axis, int i, int grid_per_axis) const;
  std::size_t grid_size(int grid_per_axis) const;
  Vec grid_point(std::size_t flat_index, int grid_per_axis) const;
};

// Finite-valued convex function with a subgradient oracle: a pointwise max
// of affine pieces, a PSD quadratic, or a sum of such functions.
class ConvexFunction {
 public:
  struct MaxAffine {
    Matrix c;  // one gradient row per piece
    Vec d;     // piece offsets; f(x) = max_j c_j'x + d_j
  };
  struct Quadratic {
    Matrix Q;  // symmetric PSD
    Vec q;
    double r = 0.0;  // f(x) = x'Qx/2 + q'x + r
  };
  struct Sum {
    std::vector<ConvexFunction> terms;
  };

  static ConvexFunction max_affine(Matrix c, Vec d);
  static ConvexFunction quadratic(Matrix Q, Vec q, double r);
  static ConvexFunction sum(std::vector<ConvexFunction> terms);

  int dim() const { return dim_; }
  double value(std::span<const double> x) const;
  std::pair<double, Vec> eval_subgrad(std::span<const double> x) const;

  bool is_max_affine() const { return std::holds_alternative<MaxAffine>(body_); }
  bool is_quadratic() const { return std::holds_alternative<Quadratic>(body_); }
  bool is_sum() const { return std::holds_alternative<Sum>(body_); }
  const MaxAffine& as_max_affine() const { return std::get<MaxAffine>(body_); }
  const Quadratic& as_quadratic() const { return std::get<Quadratic>(body_); }
  const Sum& as_sum() const { return std::get<Sum>(body_); }
  int depth() const;

 private:
  ConvexFunction() = default;
  int dim_ = 0;
  std::variant<MaxAffine, Quadratic, Sum> body_;
};

// Generators whose convex hull is the subdifferential at x: active piece
// gradients for a max of affine pieces, the singleton gradient for a
// quadratic, Minkowski sums (with dedup, capped at 10^4) for sums.
PointCloud subdiff_generators(const ConvexFunction& f, std::span<const double> x,
                              const ToleranceConfig& tol = {});

// Grid maximum of |f1 - f2| over the box, corners included. A lower bound
// on the true sup; exact when the difference is affine per grid cell.
double sup_distance_on_box(const ConvexFunction& f1, const ConvexFunction& f2,
                           const BoxRegion& K, int grid_per_axis);
double sup_distance_on_box_serial(const ConvexFunction& f1, const ConvexFunction& f2,
                                  const BoxRegion& K, int grid_per_axis);

// Union of subdifferential generators over the grid of K, deduplicated.
PointCloud subdiff_image(const ConvexFunction& f, const BoxRegion& K, int grid_per_axis,
                         const ToleranceConfig& tol = {});
PointCloud subdiff_image_serial(const ConvexFunction& f, const BoxRegion& K,
                                int grid_per_axis, const ToleranceConfig& tol = {});

struct StabilityResult {
  bool holds = false;
  double worst = 0.0;  // max distance of a subgradient of f1 at x0 from the hull
  double eps = 0.0;    // allowed enlargement 4*sqrt(delta)
};

// Checks the lower Hoelder inclusion: every subgradient of f1 at x0 lies
// within 4*sqrt(delta) of the subdifferential image of f2 over the
// sqrt(delta)-box around x0. Requires delta <= alpha^2; the value proximity
// d_K(f1, f2) <= delta on x0 + alpha*B is the caller's hypothesis.
StabilityResult holder_stability_check(const ConvexFunction& f1, const ConvexFunction& f2,
                                       const Vec& x0, double alpha, double delta,
                                       const ToleranceConfig& tol = {}, int grid_per_axis = 41);

}  // namespace lipmod
