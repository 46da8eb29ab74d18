#include "lipmod/norms.hpp"

#include <algorithm>
#include <cmath>

namespace lipmod {

NormSpec NormSpec::dual() const {
  switch (p) {
    case Norm::l1:
      return {Norm::linf};
    case Norm::linf:
      return {Norm::l1};
    default:
      return {Norm::l2};
  }
}

std::string NormSpec::name() const {
  switch (p) {
    case Norm::l1:
      return "l1";
    case Norm::linf:
      return "linf";
    default:
      return "l2";
  }
}

NormSpec NormSpec::parse(std::string_view text) {
  if (text == "l1") return {Norm::l1};
  if (text == "l2") return {Norm::l2};
  if (text == "linf") return {Norm::linf};
  throw InputError("unknown norm '" + std::string(text) + "' (expected l1, l2, or linf)");
}

namespace {

double lp_norm(std::span<const double> v, Norm p) {
  switch (p) {
    case Norm::l1: {
      double s = 0.0;
      for (double x : v) s += std::fabs(x);
      return s;
    }
    case Norm::linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::fabs(x));
      return m;
    }
    default: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
  }
}

}  // namespace

double norm_value(std::span<const double> v, NormSpec spec, NormMode mode) {
  if (v.empty()) throw DimensionError("norm_value: empty vector");
  const Norm p = mode == NormMode::primal ? spec.p : spec.dual().p;
  return lp_norm(v, p);
}

double coeff_norm(std::span<const double> pt, NormSpec spec) {
  if (pt.size() < 2) throw DimensionError("coeff_norm: need dimension >= 2");
  const auto a = pt.first(pt.size() - 1);
  return std::max(norm_value(a, spec, NormMode::dual), std::fabs(pt.back()));
}

double Metric::length(std::span<const double> v) const {
  switch (space) {
    case MetricSpace::primal:
      return norm_value(v, spec, NormMode::primal);
    case MetricSpace::dual:
      return norm_value(v, spec, NormMode::dual);
    default:
      return coeff_norm(v, spec);
  }
}

double Metric::distance(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw DimensionError("metric distance: size mismatch");
  Vec d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return length(d);
}

}  // namespace lipmod
