#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lipmod/linearize.hpp"

using namespace lipmod;
using namespace lipmod::testing;

namespace {

// slope*|x| + shift as a two-piece max.
ConvexFunction vee(double slope, double shift) {
  return ConvexFunction::max_affine({{slope}, {-slope}}, {shift, shift});
}

const ConvexFunction kAbsMinusOne = vee(1.0, -1.0);

ConvexInstance abs_instance(double x0, double alpha0 = 0.5, double alpha = 1.0) {
  return ConvexInstance{kAbsMinusOne, {x0}, alpha0, alpha, 41};
}

Metric coeff2() { return {{Norm::l2}, MetricSpace::coeff}; }

}  // namespace

TEST_SUITE("linearize") {

TEST_CASE("sublevel_polyhedron examples") {
  const auto verts = polyhedron_vertices(sublevel_polyhedron(kAbsMinusOne));
  REQUIRE(verts.size() == 2);
  CHECK(std::min(verts[0][0], verts[1][0]) == doctest::Approx(-1.0));
  CHECK(std::max(verts[0][0], verts[1][0]) == doctest::Approx(1.0));

  const auto origin = polyhedron_vertices(sublevel_polyhedron(vee(1.0, 0.0)));
  REQUIRE(origin.size() == 1);
  CHECK(origin[0][0] == doctest::Approx(0.0));

  const Polyhedron half = sublevel_polyhedron(ConvexFunction::max_affine({{1.0}}, {-1.0}));
  REQUIRE(half.rows.size() == 1);
  CHECK(half.rows[0].b == doctest::Approx(1.0));

  CHECK_THROWS_AS(sublevel_polyhedron(ConvexFunction::quadratic({{1.0}}, {0.0}, 0.0)),
                  InputError);
}

TEST_CASE("linearize_on_box examples") {
  const PointCloud both = linearize_on_box(kAbsMinusOne, BoxRegion::cube({0.0}, 2.0), 9);
  REQUIRE(both.size() == 2);
  CHECK(both.contains(Vec{1.0, 1.0}));
  CHECK(both.contains(Vec{-1.0, 1.0}));

  const PointCloud single = linearize_on_box(ConvexFunction::max_affine({{1.0}}, {-1.0}),
                                             BoxRegion::cube({0.0}, 2.0), 9);
  REQUIRE(single.size() == 1);
  CHECK(single.points[0] == Vec{1.0, 1.0});

  // Quadratic x^2/2 over {-1, 0, 1}: rows (z, z^2/2).
  const PointCloud quad = linearize_on_box(ConvexFunction::quadratic({{1.0}}, {0.0}, 0.0),
                                           BoxRegion::cube({0.0}, 1.0), 3);
  REQUIRE(quad.size() == 3);
  CHECK(quad.contains(Vec{-1.0, 0.5}));
  CHECK(quad.contains(Vec{0.0, 0.0}));
  CHECK(quad.contains(Vec{1.0, 0.5}));

  CHECK_THROWS_AS(linearize_on_box(kAbsMinusOne, BoxRegion::cube({0.0}, 1.0), 1), InputError);
}

TEST_CASE("enlarging the region never changes the feasible set") {
  SplitMix64 rng(301);
  for (int t = 0; t < 25; ++t) {
    const double s = rng.uniform(0.5, 2.0);
    const double shift = rng.uniform(-1.5, -0.5);
    const ConvexFunction f = vee(s, shift);
    const PointCloud u_small = linearize_on_box(f, BoxRegion::cube({0.0}, 3.0), 41);
    const PointCloud u_large = linearize_on_box(f, BoxRegion::cube({0.0}, 6.0), 81);
    const Polyhedron p_small{1, {{{u_small.points[0][0]}, u_small.points[0][1]},
                                 {{u_small.points[1][0]}, u_small.points[1][1]}}};
    Polyhedron p_large{1, {}};
    for (const auto& row : u_large.points) p_large.rows.push_back({{row[0]}, row[1]});
    const auto v1 = polyhedron_vertices(p_small);
    const auto v2 = polyhedron_vertices(p_large);
    REQUIRE(v1.size() == v2.size());
    const PointCloud c1(1, v1), c2(1, v2);
    CHECK(hausdorff(c1, c2, Metric{{Norm::l2}, MetricSpace::primal}) <= 1e-9);
  }
}

TEST_CASE("instance validation") {
  CHECK_NOTHROW(validate_instance(abs_instance(1.0)));
  CHECK_THROWS_AS(validate_instance(abs_instance(1.5)), PreconditionError);  // f0(x0) > 0
  const ConvexInstance empty{ConvexFunction::quadratic({{2.0}}, {0.0}, 1.0), {0.0}, 0.5, 1.0, 41};
  CHECK_THROWS_AS(validate_instance(empty), InfeasibleError);  // no sublevel set
  const ConvexInstance unbounded{ConvexFunction::max_affine({{1.0}}, {-1.0}), {0.0}, 0.5, 1.0, 41};
  CHECK_THROWS_AS(validate_instance(unbounded), InputError);
}

TEST_CASE("kappa0 fixtures") {
  const Kappa0Result at_boundary = compute_kappa0(abs_instance(1.0));
  CHECK_FALSE(at_boundary.kappa0.infinite);
  CHECK(at_boundary.kappa0.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(at_boundary.system.coeffs.contains(Vec{1.0, 1.0}));
  CHECK(at_boundary.system.coeffs.contains(Vec{-1.0, 1.0}));

  const Kappa0Result interior = compute_kappa0(abs_instance(0.0));
  CHECK(interior.kappa0.value == 0.0);
  CHECK(interior.report.classification == Classification::zero);

  const ConvexInstance pinched{vee(1.0, 0.0), {0.0}, 0.5, 1.0, 41};
  const Kappa0Result inf = compute_kappa0(pinched);
  CHECK(inf.kappa0.infinite);
  CHECK(inf.report.zero_in_c);
}

TEST_CASE("slater margin and the zero-membership cross-check") {
  const BoxRegion search = BoxRegion::cube({0.0}, 2.0);
  const SlaterResult neg = slater_margin(kAbsMinusOne, search, 41);
  CHECK(neg.margin == doctest::Approx(-1.0));
  CHECK(neg.witness[0] == doctest::Approx(0.0));

  const SlaterResult zero = slater_margin(vee(1.0, 0.0), search, 41);
  CHECK(zero.margin == doctest::Approx(0.0));

  const SlaterResult pos =
      slater_margin(ConvexFunction::quadratic({{2.0}}, {0.0}, 1.0), search, 41);
  CHECK(pos.margin == doctest::Approx(1.0));

  // Strict solutions exist exactly when zero stays outside the hull.
  for (const double x0 : {0.0, 1.0}) {
    const Kappa0Result k = compute_kappa0(abs_instance(x0));
    const SlaterResult s = slater_margin(kAbsMinusOne, k.region, 41);
    CHECK((s.margin < 0.0) == !k.report.zero_in_c);
  }
  const ConvexInstance pinched{vee(1.0, 0.0), {0.0}, 0.5, 1.0, 41};
  const Kappa0Result k = compute_kappa0(pinched);
  const SlaterResult s = slater_margin(vee(1.0, 0.0), k.region, 41);
  CHECK((s.margin < 0.0) == !k.report.zero_in_c);
}

TEST_CASE("safe_radius fixtures") {
  CHECK(safe_radius(abs_instance(1.0, 1.0)) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(safe_radius(abs_instance(1.0, 2.0)) == doctest::Approx(0.25).epsilon(1e-9));
  const ConvexInstance steep{vee(2.0, -2.0), {1.0}, 1.0, 1.0, 41};
  CHECK(safe_radius(steep) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("safe_radius in two dimensions") {
  // f0 = |x|_inf - 1: square sublevel set. On the corner arcs of the offset
  // boundary the gauge dips to 0.5/sqrt(2), below the 0.5 of the edges.
  const ConvexFunction box_gauge = ConvexFunction::max_affine(
      {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}, {-1.0, -1.0, -1.0, -1.0});
  const ConvexInstance inst{box_gauge, {0.0, 0.0}, 1.0, 1.0, 21};
  CHECK(safe_radius(inst) == doctest::Approx(0.5 / (4.0 * std::sqrt(2.0))).epsilon(1e-6));

  // Euclidean disc of radius 1 via a quadratic: same geometry.
  const ConvexFunction disc =
      ConvexFunction::quadratic({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0}, -0.5);
  const ConvexInstance round{disc, {0.0, 0.0}, 1.0, 1.0, 21};
  // boundary at radius 1.5: f0 = 1.5^2/2 - 0.5 = 0.625, eta = 0.15625
  CHECK(safe_radius(round) == doctest::Approx(0.15625).epsilon(1e-6));
}

TEST_CASE("sublevel and linearized feasible sets agree below the safe radius") {
  SplitMix64 rng(307);
  const ConvexInstance inst = abs_instance(1.0, 1.0);
  const double eta = safe_radius(inst);
  const BoxRegion region = enlargement_box(inst);
  const Metric m{{Norm::l2}, MetricSpace::primal};
  for (int t = 0; t < 50; ++t) {
    const double gs = rng.uniform(-0.02, 0.02);
    const double hs = rng.uniform(-0.02, 0.02);
    const ConvexFunction f = ConvexFunction::max_affine(
        {{1.0 + rng.uniform(-0.02, 0.02)}, {-1.0 + gs}},
        {-1.0 + rng.uniform(-0.02, 0.02), -1.0 + hs});
    REQUIRE(sup_distance_on_box(f, inst.f0, region, 101) < eta);
    const auto direct = polyhedron_vertices(sublevel_polyhedron(f));
    Polyhedron lin{1, {}};
    for (const auto& row : linearize_on_box(f, region, inst.grid_per_axis).points)
      lin.rows.push_back({{row[0]}, row[1]});
    const auto sampled = polyhedron_vertices(lin);
    REQUIRE(direct.size() == sampled.size());
    CHECK(hausdorff(PointCloud(1, direct), PointCloud(1, sampled), m) < 1e-6);
  }
}

TEST_CASE("gap bound fixtures") {
  const BoxRegion K = BoxRegion::cube({0.0}, 1.0);

  const GapBoundResult same = gap_bound_check(kAbsMinusOne, kAbsMinusOne, K, K, 41);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.holds);

  // Pure shift: both sides are exactly the shift.
  const GapBoundResult shift = gap_bound_check(vee(1.0, 0.0), vee(1.0, 0.3), K, K, 41);
  CHECK(shift.lhs == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(shift.rhs == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(shift.holds);

  // Slope change: lhs 0.1 vs rho*0.1 + 0.1 = 0.3.
  const GapBoundResult scale = gap_bound_check(vee(1.0, 0.0), vee(0.9, 0.0), K, K, 41);
  CHECK(scale.lhs == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(scale.rho == doctest::Approx(2.0));
  CHECK(scale.rhs == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(scale.holds);
}

TEST_CASE("gap bound on random max-affine pairs") {
  SplitMix64 rng(311);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + rng.uniform_int(2);
    const int pieces = 2 + rng.uniform_int(3);
    Matrix c1, c2;
    Vec d1, d2;
    for (int j = 0; j < pieces; ++j) {
      Vec cj = random_vec(n, rng, 2.0);
      c2.push_back(cj);
      c1.push_back(std::move(cj));
      const double dj = rng.uniform(-1.0, 1.0);
      d1.push_back(dj);
      d2.push_back(dj);
    }
    for (auto& row : c2)
      for (double& v : row) v += rng.uniform(-0.1, 0.1);
    for (double& v : d2) v += rng.uniform(-0.1, 0.1);
    const ConvexFunction f1 = ConvexFunction::max_affine(c1, d1);
    const ConvexFunction f2 = ConvexFunction::max_affine(c2, d2);
    const BoxRegion K = BoxRegion::cube(random_vec(n, rng, 0.5), rng.uniform(0.8, 1.5));
    const GapBoundResult res = gap_bound_check(f1, f2, K, K, n == 1 ? 501 : 81);
    CHECK(res.holds);
  }
}

TEST_CASE("distance to a smooth sublevel set against the interval oracle") {
  // Unit disc (quadratic): distances have the closed form |x| - 1.
  const ConvexFunction disc =
      ConvexFunction::quadratic({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0}, -0.5);
  for (const double r : {1.5, 2.0, 3.0}) {
    const double d = dist_to_sublevel(disc, {r, 0.0});
    CHECK(d == doctest::Approx(r - 1.0).epsilon(1e-4));
    const double diag = dist_to_sublevel(disc, {r, r});
    CHECK(diag == doctest::Approx(r * std::sqrt(2.0) - 1.0).epsilon(1e-4));
  }
  CHECK(dist_to_sublevel(disc, {0.3, 0.2}) == 0.0);
}

TEST_CASE("convex lipschitz estimate fixtures") {
  const ConvexInstance inst = abs_instance(1.0);

  const ConvexLipResult same =
      convex_lipschitz_check(inst, 2.2, kAbsMinusOne, kAbsMinusOne, {1.0}, 0.01);
  CHECK(same.hypotheses_met);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.holds);

  // Shift of the right-hand function: lhs = delta, rhs = kappa * delta.
  const double delta = 0.01;
  const ConvexLipResult shifted =
      convex_lipschitz_check(inst, 2.2, kAbsMinusOne, vee(1.0, -1.0 + delta), {1.0}, delta);
  CHECK(shifted.hypotheses_met);
  CHECK(shifted.lhs == doctest::Approx(delta).epsilon(1e-9));
  CHECK(shifted.rhs == doctest::Approx(2.2 * delta).epsilon(1e-9));
  CHECK(shifted.holds);

  // Slope tilt on both pieces.
  const double eps = 0.01;
  const ConvexFunction tilted =
      ConvexFunction::max_affine({{1.0 + eps}, {-(1.0 + eps)}}, {-1.0, -1.0});
  const ConvexLipResult tilt =
      convex_lipschitz_check(inst, 2.2, kAbsMinusOne, tilted, {1.0}, 0.03);
  CHECK(tilt.hypotheses_met);
  CHECK(tilt.lhs == doctest::Approx(1.0 - 1.0 / (1.0 + eps)).epsilon(1e-6));
  CHECK(tilt.holds);

  // Hypothesis violations are reported, not thrown.
  const ConvexLipResult far =
      convex_lipschitz_check(inst, 2.2, kAbsMinusOne, kAbsMinusOne, {1.5}, 0.01);
  CHECK_FALSE(far.hypotheses_met);
}

TEST_CASE("convex lipschitz estimate on random perturbations") {
  SplitMix64 rng(313);
  const ConvexInstance inst = abs_instance(1.0);
  const BoxRegion e0 = enlargement_box(inst);
  int met = 0, unmet = 0;
  for (const double delta : {1e-2, 1e-3}) {
    for (int t = 0; t < 30; ++t) {
      const auto perturb = [&](double scale) {
        return ConvexFunction::max_affine(
            {{1.0 + rng.uniform(-scale, scale)}, {-1.0 + rng.uniform(-scale, scale)}},
            {-1.0 + rng.uniform(-scale, scale), -1.0 + rng.uniform(-scale, scale)});
      };
      const double scale = 0.2 * delta;
      const ConvexFunction f1 = perturb(scale);
      const ConvexFunction f2 = perturb(scale);
      const Vec x1 = {project_polyhedron({1.0}, sublevel_polyhedron(f1), {Norm::l2}).point};
      const ConvexLipResult res = convex_lipschitz_check(inst, 2.2, f1, f2, x1, delta);
      if (!res.hypotheses_met) {
        ++unmet;
        continue;
      }
      ++met;
      CHECK(res.holds);
    }
  }
  CHECK(met > unmet * 9);  // hypothesis failures stay below ten percent
  (void)e0;
}

}  // TEST_SUITE
