#pragma once

#include <span>
#include <string>
#include <string_view>

#include "lipmod/vec.hpp"

namespace lipmod {

enum class Norm { l1, l2, linf };
enum class NormMode { primal, dual };

// Which lp norm lives on the variable space. The dual norm and the
// coefficient-space norm max{||a||_*, |b|} are derived from it.
struct NormSpec {
  Norm p = Norm::l2;

  NormSpec dual() const;
  std::string name() const;
  static NormSpec parse(std::string_view text);

  friend bool operator==(NormSpec a, NormSpec b) { return a.p == b.p; }
};

// ||v||_p for primal mode, ||v||_q with 1/p + 1/q = 1 for dual mode.
double norm_value(std::span<const double> v, NormSpec spec, NormMode mode);

// Norm on coefficient space: a point (a, b) with a in R^n, b scalar is
// measured as max{||a||_*, |b|}.
double coeff_norm(std::span<const double> pt, NormSpec spec);

enum class MetricSpace { primal, dual, coeff };

// Distance functor shared by the point-cloud kernels.
struct Metric {
  NormSpec spec{};
  MetricSpace space = MetricSpace::coeff;

  double length(std::span<const double> v) const;
  double distance(std::span<const double> x, std::span<const double> y) const;
};

}  // namespace lipmod
