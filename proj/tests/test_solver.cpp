#include <doctest.h>

#include <cmath>
#include <set>

#include "billiards/solver.hpp"
#include "billiards/sphere_oracle.hpp"
#include "helpers.hpp"

using namespace billiards;
namespace oracle = billiards::sphere_oracle;

namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

Vector vec3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

SolverSettings quick(int starts, std::uint64_t seed = 7) {
  SolverSettings s;
  s.starts = starts;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("circle closed strings: exactly n/2 orbits with known lengths") {
  auto circle = make_sphere(1, 1.0);
  const Vector A = vec2(1, 0);
  for (int n : {2, 4}) {
    const auto report = solve_closed(circle, A, n, quick(300));
    CHECK(report.isolated_count() == n / 2);
    CHECK(report.families.empty());
    std::multiset<int> lengths_seen;
    for (const auto& o : report.orbits) {
      bool matched = false;
      for (int k = 1; k <= (n + 1) / 2; ++k) {
        if (std::abs(o.length + oracle::closed_critical_value(k, n)) < 1e-8) {
          matched = true;
          lengths_seen.insert(k);
        }
      }
      CHECK(matched);
      CHECK(o.orbit_size == 2);
      CHECK(o.nullity == 0);
      CHECK(testing::reflection_law_residual(o.representative) <= 1e-8);
    }
    CHECK(lengths_seen.size() == static_cast<std::size_t>(n / 2));
  }
}

TEST_CASE("sphere n = 1: the unique diameter orbit") {
  auto sphere = make_sphere(2, 1.0);
  const auto report = solve_closed(sphere, vec3(0, 0, 1), 1, quick(60));
  REQUIRE(report.isolated_count() == 1);
  CHECK(report.families.empty());
  const auto& o = report.orbits.front();
  CHECK(o.length == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(o.morse_index == 0);
  CHECK(o.nullity == 0);
  CHECK(o.orbit_size == 1);
  CHECK((o.representative.point(0) - vec3(0, 0, -1)).norm() <= 1e-8);
}

TEST_CASE("ellipse periodic n = 2: the two axis bounces") {
  auto ellipse = make_ellipsoid({2.0, 1.0});
  const auto report = solve_periodic(ellipse, 2, quick(200));
  REQUIRE(report.isolated_count() == 2);
  CHECK(report.families.empty());
  const auto& minor = report.orbits[0];  // sorted by length
  const auto& major = report.orbits[1];
  CHECK(minor.length == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(major.length == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(major.morse_index == 0);
  CHECK(minor.morse_index == 1);
  CHECK(major.orbit_size == 2);
  for (const auto& o : report.orbits)
    CHECK(testing::reflection_law_residual(o.representative) <= 1e-8);
}

TEST_CASE("ellipsoid closed strings: count meets the two-bounce bound") {
  auto body = make_ellipsoid({1.05, 1.0, 0.95});
  const auto report = solve_closed(body, vec3(0, 1, 0), 2, quick(400));
  CHECK(report.isolated_count() >= 2);
  for (const auto& o : report.orbits)
    CHECK(testing::reflection_law_residual(o.representative) <= 1e-8);
}

TEST_CASE("sphere periodic n = 5: two degenerate families") {
  auto sphere = make_sphere(2, 1.0);
  const auto report = solve_periodic(sphere, 5, quick(150));
  CHECK(report.isolated_count() == 0);
  REQUIRE(report.families.size() == 2);
  for (const auto& fam : report.families) {
    CHECK(fam.nullity == 2 * 2 - 1);  // family dimension 2m-1
    CHECK(fam.degenerate);
  }
  // Sorted by length: the convex pentagon (level p = 1) is shorter than the
  // pentagram (level p = 0, the bottom of the functional).
  CHECK(report.families[0].length ==
        doctest::Approx(-oracle::periodic_critical_value(1, 5)).epsilon(1e-8));
  CHECK(report.families[1].length ==
        doctest::Approx(-oracle::periodic_critical_value(0, 5)).epsilon(1e-8));
  CHECK(report.families[0].morse_index == 2);  // 2p(m-1) at p = 1
  CHECK(report.families[1].morse_index == 0);
}

TEST_CASE("classify: sphere oracle indices") {
  // Closed strings, even n, level p: index 2p(m-1) with nullity m-1.
  for (int m : {2, 3}) {
    for (int n : {4, 6}) {
      for (int p = 0; p <= (n - 1) / 2; ++p) {
        const int k = oracle::closed_k_for_level(p, n);
        Vector A = Vector::Zero(m + 1), a = Vector::Zero(m + 1);
        A[0] = 1.0;
        a[1] = 1.0;
        const auto c = oracle::closed_trajectory(A, a, k, n);
        const auto cls = classify(c, 1e-9, 1e-6);
        CHECK(cls.morse_index == 2 * p * (m - 1));
        CHECK(cls.nullity == m - 1);
        CHECK(!cls.is_generic);
      }
    }
  }
  // Odd n, p = 0: an isolated minimum.
  const auto bottom = oracle::closed_trajectory(vec3(1, 0, 0), vec3(0, 1, 0), 3, 5);
  const auto cls = classify(bottom, 1e-9, 1e-6);
  CHECK(cls.morse_index == 0);
  CHECK(cls.nullity == 0);
  CHECK(cls.is_generic);
}

TEST_CASE("classify: periodic families have index 2p(m-1), nullity 2m-1") {
  for (int n : {3, 5}) {
    for (int p = 0; p <= (n - 3) / 2; ++p) {
      const auto c = oracle::periodic_family(n, p, vec3(1, 0, 0), vec3(0, 1, 0));
      const auto cls = classify(c, 1e-9, 1e-6);
      CHECK(cls.morse_index == 2 * p * 1);
      CHECK(cls.nullity == 3);
    }
  }
}

TEST_CASE("classify rejects non-critical configurations") {
  auto sphere = make_sphere(2, 1.0);
  Rng rng(23);
  const auto c = testing::random_admissible(sphere, true, 3, rng);
  CHECK_THROWS_AS(classify(c, 1e-10, 1e-6), NotCriticalError);
}

TEST_CASE("deduplicate merges group copies and keeps distinct orbits") {
  auto ellipse = make_ellipsoid({2.0, 1.0});
  const auto make_orbit = [&](std::vector<Vector> pts) {
    CriticalOrbit o{.representative = Configuration::cyclic(ellipse, std::move(pts))};
    o.length = -neg_total_length(o.representative);
    o.canonical_form = canonical_form(o.representative, GroupKind::Dn, 1e-7 * 4.0);
    return o;
  };
  std::vector<CriticalOrbit> orbits;
  orbits.push_back(make_orbit({vec2(2, 0), vec2(-2, 0)}));
  orbits.push_back(make_orbit({vec2(-2, 0), vec2(2, 0)}));  // rotated copy
  orbits.push_back(make_orbit({vec2(0, 1), vec2(0, -1)}));  // the other axis
  const auto dedup = deduplicate(orbits, GroupKind::Dn, 1e-6 * 4.0);
  CHECK(dedup.size() == 2);

  // Closed-string reversal duplicates.
  auto sphere = make_sphere(2, 1.0);
  Rng rng(29);
  const auto c = testing::random_admissible(sphere, true, 3, rng);
  CriticalOrbit a{.representative = c};
  a.canonical_form = canonical_form(c, GroupKind::Z2, 1e-7 * 2.0);
  CriticalOrbit b{.representative = reflect_T(c)};
  b.canonical_form = canonical_form(reflect_T(c), GroupKind::Z2, 1e-7 * 2.0);
  CHECK(a.canonical_form == b.canonical_form);
  CHECK(deduplicate({a, b}, GroupKind::Z2, 1e-6 * 2.0).size() == 1);
}

TEST_CASE("boundary filter") {
  auto circle = make_sphere(1, 1.0);
  // A regular polygon far from the boundary band is kept.
  std::vector<Vector> pts;
  for (int j = 0; j < 4; ++j)
    pts.push_back(vec2(std::cos(M_PI * j / 2.0), std::sin(M_PI * j / 2.0)));
  Configuration square = Configuration::cyclic(circle, pts);
  CHECK(boundary_filter(square, 1e-6) == BoundaryVerdict::Keep);

  // A near-collapsed pair sits on the shrinking side of its own gap product:
  // at the band edge the length gradient points toward smaller products.
  Configuration pinch = Configuration::cyclic(
      circle, {vec2(1, 0), vec2(std::cos(0.05), std::sin(0.05)), vec2(-1, 0)});
  const double prod = pinch.gap_product();
  CHECK(boundary_filter(pinch, prod) == BoundaryVerdict::Reject);
  CHECK(boundary_filter(pinch, prod / 2.0) == BoundaryVerdict::Keep);   // interior
  CHECK(boundary_filter(pinch, prod * 10.0) == BoundaryVerdict::Reject);  // outside
}

TEST_CASE("collapsing starts are rejected, not double counted") {
  auto ellipse = make_ellipsoid({2.0, 1.0});
  // n = 3 with two points nearly fused: the search drains toward the
  // two-bounce orbit with a doubled vertex and must be screened out.
  SolverSettings s = quick(1);
  const auto resolved = s.resolved(*ellipse, 3);
  Configuration start = Configuration::cyclic(
      ellipse, {vec2(2.0 * std::cos(0.02), std::sin(0.02)),
                vec2(2.0 * std::cos(-0.02), std::sin(-0.02)), vec2(-2, 0)});
  bool converged_to_triple = true;
  try {
    Configuration c = refine_critical(start, resolved);
    // If it converged, it must be a genuine admissible critical point well
    // inside the truncation, with three distinct vertices.
    CHECK(c.min_gap() > 1e-3);
    CHECK(testing::reflection_law_residual(c) <= 1e-7);
  } catch (const NoConvergenceError&) {
    converged_to_triple = false;
  }
  // Either outcome is acceptable; the full solve must still count exactly
  // the true 3-periodic orbits plus the 2-periodic artifacts rejected.
  const auto report = solve_periodic(ellipse, 3, quick(250));
  for (const auto& o : report.orbits) {
    CHECK(o.representative.min_gap() > 1e-3);
    CHECK(testing::reflection_law_residual(o.representative) <= 1e-8);
  }
  (void)converged_to_triple;
}

TEST_CASE("orbit counts are monotone in the number of starts") {
  auto circle = make_sphere(1, 1.0);
  const Vector A = vec2(std::cos(0.3), std::sin(0.3));
  const auto small = solve_closed(circle, A, 6, quick(40, 99));
  const auto big = solve_closed(circle, A, 6, quick(160, 99));
  CHECK(big.isolated_count() >= small.isolated_count());
  // Same seed: the smaller run's starts are a prefix of the larger run's, so
  // every orbit found by the small run appears in the big run.
  for (const auto& o : small.orbits) {
    bool found = false;
    for (const auto& p : big.orbits)
      if (std::abs(p.length - o.length) < 1e-8) found = true;
    CHECK(found);
  }
}

TEST_CASE("newton recovers oracle critical manifolds from perturbations") {
  Rng rng(31);
  auto sphere = make_sphere(2, 1.0);
  const Vector A = vec3(1, 0, 0);
  for (int n : {2, 4}) {
    for (int k = 1; k <= (n + 1) / 2; ++k) {
      Configuration c = oracle::closed_trajectory(A, vec3(0, 1, 0), k, n);
      Matrix noise(c.n(), c.m());
      for (int i = 0; i < noise.size(); ++i) noise.data()[i] = 1e-3 * rng.normal();
      Configuration perturbed = retract(c, noise);
      SolverSettings s;
      Configuration back = refine_critical(perturbed, s.resolved(*sphere, n));

      // Distance to the analytic family: fit the great-circle direction and
      // rebuild the exact trajectory.
      const double psi = oracle::closed_angle(k, n);
      Vector a_fit = Vector::Zero(3);
      for (int j = 1; j <= n; ++j)
        a_fit += std::sin(j * psi) * (back.point(j - 1) - std::cos(j * psi) * A);
      a_fit -= a_fit.dot(A) * A;
      a_fit.normalize();
      Configuration nearest = oracle::closed_trajectory(A, a_fit, k, n);
      double dist = 0.0;
      for (int j = 0; j < n; ++j)
        dist = std::max(dist, (back.point(j) - nearest.point(j)).norm());
      CHECK(dist <= 1e-8);
    }
  }
}

TEST_CASE("implicit body: quartic ball two-bounce orbits") {
  std::vector<PolyTerm> terms = {{1.0, {4, 0, 0}},
                                 {1.0, {0, 4, 0}},
                                 {1.0, {0, 0, 4}},
                                 {-1.0, {0, 0, 0}}};
  auto body = make_implicit(2, polynomial_implicit(terms));
  const auto report = solve_periodic(body, 2, quick(120));

  // Bounces along the main diagonals hit curved points and are Morse; their
  // length is 4 * 3^{1/4} (vertices at (1,1,1)/3^{1/4}).
  REQUIRE(report.isolated_count() >= 1);
  for (const auto& o : report.orbits) {
    CHECK(o.length == doctest::Approx(4.0 * std::pow(3.0, 0.25)).epsilon(1e-8));
    CHECK(testing::reflection_law_residual(o.representative) <= 1e-8);
  }
  // The axis bounce crosses the flat points of the quartic: length 4 and a
  // genuinely degenerate Hessian, reported as a family, not an orbit.
  bool axis_seen = false;
  for (const auto& f : report.families) {
    CHECK(testing::reflection_law_residual(f.representative) <= 1e-7);
    if (std::abs(f.length - 4.0) < 1e-6) {
      axis_seen = true;
      CHECK(f.nullity == 2);
    }
  }
  CHECK(axis_seen);
}

TEST_CASE("deflation does not change the orbit set") {
  auto circle = make_sphere(1, 1.0);
  const Vector A = vec2(1, 0);
  SolverSettings with = quick(200);
  SolverSettings without = quick(200);
  without.deflation = false;
  const auto r1 = solve_closed(circle, A, 4, with);
  const auto r2 = solve_closed(circle, A, 4, without);
  CHECK(r1.isolated_count() == 2);
  CHECK(r2.isolated_count() == 2);
}

TEST_CASE("solver input validation") {
  auto sphere = make_sphere(2, 1.0);
  CHECK_THROWS_AS(solve_closed(sphere, vec3(2, 0, 0), 2, quick(5)), BadInputError);
  CHECK_THROWS_AS(solve_closed(sphere, vec3(1, 0, 0), 0, quick(5)), BadInputError);
  CHECK_THROWS_AS(solve_periodic(sphere, 1, quick(5)), BadInputError);
}

}  // TEST_SUITE
