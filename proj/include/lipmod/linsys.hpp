#pragma once

#include <vector>

#include "lipmod/hulls.hpp"

namespace lipmod {

// A nonnegative real extended with +infinity, kept explicit rather than as
// a sentinel double so reports serialize it distinctly ("inf").
struct ExtReal {
  double value = 0.0;
  bool infinite = false;

  static ExtReal inf() { return {0.0, true}; }
  static ExtReal finite(double v) { return {v, false}; }
};

// Linear inequality system a'x <= b whose rows form a point cloud in
// R^{n+1}. Finite clouds keep the gradient part bounded automatically.
struct LinearSystem {
  int n = 0;
  PointCloud coeffs;  // dim n+1, rows (a, b)
  NormSpec spec{};

  LinearSystem(int n_, PointCloud rows, NormSpec spec_);

  std::size_t row_count() const { return coeffs.size(); }
  Vec gradient(std::size_t i) const;
  double offset(std::size_t i) const;
  Polyhedron polyhedron() const;
};

enum class Classification { zero, finite, infinite };
const char* to_string(Classification c);

struct SscReport {
  double margin = 0.0;  // optimal epsilon of the margin LP
  Vec point;            // maximizer x-hat
  double box_radius = 0.0;
  bool box_active = false;  // the artificial box binds at the optimum
};

struct CSetResult {
  ExtReal dist;
  bool empty = false;
  bool zero_in = false;
  std::vector<int> active;
  Vec witness;  // convex weights over all rows (zero off the support)
};

struct ModulusReport {
  ExtReal modulus;
  ExtReal c_distance;
  bool c_empty = false;
  bool zero_in_c = false;
  std::vector<int> active_indices;
  double ssc_margin = 0.0;
  Classification classification = Classification::finite;
  SscReport ssc;
  Vec x0_used;
  bool x0_projected = false;
  Vec witness;
};

// d(x, F(U)) in the primal norm; throws InfeasibleError when F(U) is empty.
double dist_to_feasible(const Vec& x, const LinearSystem& sys, const ToleranceConfig& tol = {});

// Rows whose slack b - a'x0 vanishes within active_tol. x0 must be feasible
// within feas_tol.
std::vector<int> active_set(const Vec& x0, const LinearSystem& sys,
                            const ToleranceConfig& tol = {});

// Distance from the origin to {u : (u, u'x0) in conv U} in the dual norm,
// computed over the active-gradient hull.
CSetResult c_set_distance(const LinearSystem& sys, const Vec& x0,
                          const ToleranceConfig& tol = {});

// Independent route: minimizes ||sum lambda_i a_i||_* over simplex weights
// whose slack combination vanishes, by enumerating the vertices of that
// polytope directly. Never consults the active-set classification.
CSetResult c_set_distance_fallback(const LinearSystem& sys, const Vec& x0,
                                   const ToleranceConfig& tol = {}, double eq_tol = 1e-12);

// max eps s.t. a'x + eps <= b for all rows, |x|_inf <= box_radius.
// A positive margin certifies the strong Slater condition.
SscReport ssc_margin(const LinearSystem& sys, double box_radius = 1e6,
                     const ToleranceConfig& tol = {});

// (||x0|| + 1) / d_*(0, C) under the conventions 1/0 = inf, 1/inf = 0.
ModulusReport lipschitz_modulus(const LinearSystem& sys, const Vec& x0,
                                const ToleranceConfig& tol = {}, double box_radius = 1e6);

}  // namespace lipmod
