#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lipmod/linsys.hpp"

using namespace lipmod;
using namespace lipmod::testing;

namespace {

LinearSystem make_sys(int n, std::vector<Vec> rows, Norm p = Norm::l2) {
  return LinearSystem(n, PointCloud(n + 1, std::move(rows)), NormSpec{p});
}

}  // namespace

TEST_SUITE("linsys") {

TEST_CASE("dist_to_feasible examples") {
  CHECK(dist_to_feasible({1.0}, make_sys(1, {{1.0, 0.0}})) == doctest::Approx(1.0));
  CHECK(dist_to_feasible({-0.5}, make_sys(1, {{1.0, 0.0}})) == 0.0);
  CHECK(dist_to_feasible({2.0, 0.0}, make_sys(2, {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}})) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(dist_to_feasible({0.0}, make_sys(1, {{1.0, -1.0}, {-1.0, -2.0}})),
                  InfeasibleError);
}

TEST_CASE("active_set examples") {
  CHECK(active_set({0.0}, make_sys(1, {{1.0, 1.0}, {-1.0, 1.0}})).empty());
  CHECK(active_set({1.0}, make_sys(1, {{1.0, 1.0}})) == std::vector<int>{0});
  CHECK(active_set({0.0}, make_sys(1, {{1.0, 0.0}, {-1.0, 0.0}})) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(active_set({2.0}, make_sys(1, {{1.0, 1.0}})), PreconditionError);
}

TEST_CASE("c_set_distance examples") {
  // Single active row: the set collapses to {1}.
  for (const Norm p : {Norm::l1, Norm::l2, Norm::linf}) {
    const CSetResult r = c_set_distance(make_sys(1, {{1.0, 1.0}}, p), {1.0});
    CHECK_FALSE(r.empty);
    CHECK(r.dist.value == doctest::Approx(1.0));
    CHECK(r.witness[0] == doctest::Approx(1.0));
  }

  const CSetResult empty = c_set_distance(make_sys(1, {{1.0, 1.0}, {-1.0, 1.0}}), {0.0});
  CHECK(empty.empty);
  CHECK(empty.dist.infinite);

  const CSetResult zero = c_set_distance(make_sys(1, {{1.0, 0.0}, {-1.0, 0.0}}), {0.0});
  CHECK(zero.zero_in);
  CHECK(zero.dist.value == doctest::Approx(0.0));
}

TEST_CASE("modulus fixtures") {
  const ModulusReport two = lipschitz_modulus(make_sys(1, {{1.0, 1.0}}), {1.0});
  CHECK_FALSE(two.modulus.infinite);
  CHECK(two.modulus.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(two.classification == Classification::finite);

  const ModulusReport zero = lipschitz_modulus(make_sys(1, {{1.0, 1.0}, {-1.0, 1.0}}), {0.0});
  CHECK(zero.classification == Classification::zero);
  CHECK(zero.modulus.value == 0.0);
  CHECK(zero.c_empty);

  const ModulusReport inf = lipschitz_modulus(make_sys(1, {{1.0, 0.0}, {-1.0, 0.0}}), {0.0});
  CHECK(inf.classification == Classification::infinite);
  CHECK(inf.modulus.infinite);
  CHECK(inf.zero_in_c);

  const ModulusReport planar =
      lipschitz_modulus(make_sys(2, {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}}), {1.0, 0.0});
  CHECK(planar.modulus.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(planar.active_indices == std::vector<int>{0});
}

TEST_CASE("report flags stay mutually consistent") {
  SplitMix64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const RandomSystem inst = random_feasible_system(rng);
    const ModulusReport rep = lipschitz_modulus(inst.sys, inst.x0);
    CHECK((rep.classification == Classification::zero) == rep.c_empty);
    CHECK((rep.classification == Classification::infinite) == rep.zero_in_c);
    if (rep.classification == Classification::finite) {
      CHECK_FALSE(rep.modulus.infinite);
      const double num = norm_value(rep.x0_used, inst.sys.spec, NormMode::primal) + 1.0;
      CHECK(rep.modulus.value == doctest::Approx(num / rep.c_distance.value));
    }
  }
}

TEST_CASE("ssc_margin examples") {
  const SscReport pos = ssc_margin(make_sys(1, {{1.0, 1.0}, {-1.0, 1.0}}), 10.0);
  CHECK(pos.margin == doctest::Approx(1.0));
  CHECK(pos.point[0] == doctest::Approx(0.0).epsilon(1e-6));

  CHECK(ssc_margin(make_sys(1, {{1.0, 0.0}, {-1.0, 0.0}}), 10.0).margin ==
        doctest::Approx(0.0).epsilon(1e-9));

  // x <= -1 and -x <= -1 cannot hold with positive slack anywhere.
  CHECK(ssc_margin(make_sys(1, {{1.0, -1.0}, {-1.0, -1.0}}), 10.0).margin ==
        doctest::Approx(-1.0));
}

TEST_CASE("slater characterization of the zero membership") {
  SplitMix64 rng(103);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const RandomSystem inst = random_feasible_system(rng);
    const SscReport ssc = ssc_margin(inst.sys, 1e6);
    // A positive margin certifies the condition even when the box binds;
    // only a non-positive margin at the box is inconclusive.
    if (ssc.box_active && !(ssc.margin > 0.0)) continue;
    const CSetResult cs = c_set_distance(inst.sys, inst.x0);
    const bool zero_in = !cs.empty && cs.zero_in;
    CHECK((ssc.margin > 0.0) == !zero_in);
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("active-set reduction agrees with the vertex-program fallback") {
  SplitMix64 rng(107);
  for (int t = 0; t < 200; ++t) {
    const RandomSystem inst = random_feasible_system(rng);
    const CSetResult fast = c_set_distance(inst.sys, inst.x0);
    const CSetResult slow = c_set_distance_fallback(inst.sys, inst.x0);
    REQUIRE(fast.empty == slow.empty);
    if (fast.empty) continue;
    CHECK(std::fabs(fast.dist.value - slow.dist.value) <= 1e-7);
    CHECK(fast.zero_in == slow.zero_in);
  }
}

TEST_CASE("adding a satisfied row never clears zero_in_c") {
  SplitMix64 rng(109);
  for (int t = 0; t < 100; ++t) {
    const RandomSystem inst = random_feasible_system(rng);
    const CSetResult before = c_set_distance(inst.sys, inst.x0);
    if (before.empty || !before.zero_in) continue;
    std::vector<Vec> rows = inst.sys.coeffs.points;
    Vec a = random_vec(inst.sys.n, rng);
    Vec row = a;
    row.push_back(dot(a, inst.x0) + rng.uniform(0.0, 1.0));
    rows.push_back(std::move(row));
    const LinearSystem bigger(inst.sys.n, PointCloud(inst.sys.n + 1, rows), inst.sys.spec);
    CHECK(c_set_distance(bigger, inst.x0).zero_in);
  }
}

TEST_CASE("positive margin gives a finite modulus at every feasible point") {
  SplitMix64 rng(113);
  int instances = 0;
  while (instances < 50) {
    const RandomSystem inst = random_feasible_system(rng);
    const SscReport ssc = ssc_margin(inst.sys, 1e6);
    if (!(ssc.margin > 1e-6) || ssc.box_active) continue;
    ++instances;
    const Polyhedron P = inst.sys.polyhedron();
    for (int k = 0; k < 5; ++k) {
      const Vec probe = random_vec(inst.sys.n, rng, 2.0);
      const Vec x = project_polyhedron(probe, P, inst.sys.spec).point;
      const ModulusReport rep = lipschitz_modulus(inst.sys, x);
      CHECK_FALSE(rep.modulus.infinite);
    }
  }
}

TEST_CASE("slightly infeasible points are projected with a warning") {
  const LinearSystem sys = make_sys(1, {{1.0, 1.0}});
  const ModulusReport rep = lipschitz_modulus(sys, {1.0 + 1e-5});
  CHECK(rep.x0_projected);
  CHECK(rep.x0_used[0] == doctest::Approx(1.0));
  CHECK(rep.modulus.value == doctest::Approx(2.0).epsilon(1e-6));
}

}  // TEST_SUITE
