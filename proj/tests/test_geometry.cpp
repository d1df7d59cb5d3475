#include <doctest.h>

#include <cmath>

#include "billiards/geometry.hpp"
#include "billiards/rng.hpp"
#include "helpers.hpp"

using namespace billiards;

namespace {

Vector vec3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

ImplicitConvex quartic_ball() {
  // x^4 + y^4 + z^4 = 1
  std::vector<PolyTerm> terms = {{1.0, {4, 0, 0}},
                                 {1.0, {0, 4, 0}},
                                 {1.0, {0, 0, 4}},
                                 {-1.0, {0, 0, 0}}};
  return polynomial_implicit(terms);
}

// Finite-difference gradient of the residual, for normal cross-checks.
Vector fd_residual_gradient(const ConvexBody& body, const Vector& p, double h = 1e-6) {
  Vector g(p.size());
  for (int i = 0; i < p.size(); ++i) {
    Vector e = Vector::Zero(p.size());
    e[i] = h;
    g[i] = (body.residual(p + e) - body.residual(p - e)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("sphere projection is radial") {
  auto body = make_sphere(2, 1.0);
  CHECK((body->surface_project(vec3(2, 0, 0)) - vec3(1, 0, 0)).norm() == 0.0);
  CHECK((body->surface_project(vec3(0, -3, 0)) - vec3(0, -1, 0)).norm() == 0.0);
  CHECK_THROWS_AS(body->surface_project(vec3(0, 0, 0)), BadInputError);
}

TEST_CASE("ellipsoid projection: axis point") {
  auto body = make_ellipsoid({2.0, 1.0, 1.0});
  const Vector p = body->surface_project(vec3(4, 0, 0));
  CHECK((p - vec3(2, 0, 0)).norm() <= 1e-12);
}

TEST_CASE("ellipsoid projection minimizes distance") {
  auto body = make_ellipsoid({2.0, 1.0, 1.0});
  const Vector x = vec3(1, 1, 0);
  const Vector p = body->surface_project(x);
  CHECK(std::abs(body->residual(p)) <= 1e-12);
  const double dist = (x - p).norm();
  // Dense sweep over the z = 0 section (where the minimizer lives by
  // symmetry) plus random surface samples: nothing may beat the projection.
  for (int i = 0; i < 20000; ++i) {
    const double t = 2.0 * M_PI * i / 20000;
    const Vector q = vec3(2.0 * std::cos(t), std::sin(t), 0.0);
    CHECK(dist <= (x - q).norm() + 1e-10);
  }
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Vector q = testing::random_surface_point(*body, rng);
    CHECK(dist <= (x - q).norm() + 1e-10);
  }
}

TEST_CASE("projection is idempotent") {
  Rng rng(11);
  auto sphere = make_sphere(2, 1.5);
  auto ell = make_ellipsoid({1.3, 1.0, 0.8});
  auto quartic = make_implicit(2, quartic_ball());
  for (const auto& body : {sphere, ell, quartic}) {
    for (int i = 0; i < 50; ++i) {
      const Vector p = testing::random_surface_point(*body, rng);
      const Vector q = body->surface_project(p);
      CHECK((p - q).norm() <= 1e-10);
    }
  }
}

TEST_CASE("tangent basis orthonormal and orthogonal to the normal") {
  Rng rng(5);
  auto sphere = make_sphere(3, 1.0);
  auto ell = make_ellipsoid({2.0, 1.0, 1.0});
  auto quartic = make_implicit(2, quartic_ball());
  for (const auto& body : {sphere, ell, quartic}) {
    for (int i = 0; i < 25; ++i) {
      const Vector p = testing::random_surface_point(*body, rng);
      const Matrix B = body->tangent_basis(p);
      const Vector nu = body->outward_normal(p);
      REQUIRE(B.cols() == body->dim_m());
      CHECK((B.transpose() * B - Matrix::Identity(B.cols(), B.cols())).norm() <= 1e-12);
      CHECK((B.transpose() * nu).norm() <= 1e-10);
    }
  }
}

TEST_CASE("tangent basis at special points") {
  auto sphere = make_sphere(2, 1.0);
  const Matrix B = sphere->tangent_basis(vec3(0, 0, 1));
  for (int c = 0; c < B.cols(); ++c) CHECK(std::abs(B(2, c)) <= 1e-12);

  auto ell = make_ellipsoid({2.0, 1.0, 1.0});
  const Matrix Be = ell->tangent_basis(vec3(2, 0, 0));
  for (int c = 0; c < Be.cols(); ++c) CHECK(std::abs(Be(0, c)) <= 1e-12);

  auto quartic = make_implicit(2, quartic_ball());
  const Matrix Bq = quartic->tangent_basis(vec3(1, 0, 0));
  for (int c = 0; c < Bq.cols(); ++c) CHECK(std::abs(Bq(0, c)) <= 1e-12);
}

TEST_CASE("outward normals") {
  auto sphere = make_sphere(2, 1.0);
  const Vector p = vec3(0, 1, 0);
  CHECK((sphere->outward_normal(p) - p).norm() <= 1e-14);

  auto ell = make_ellipsoid({1.5, 1.0, 0.5});
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vector q = testing::random_surface_point(*ell, rng);
    Vector expect(3);
    expect << q[0] / (1.5 * 1.5), q[1], q[2] / (0.5 * 0.5);
    expect.normalize();
    CHECK((ell->outward_normal(q) - expect).norm() <= 1e-12);
    CHECK(ell->outward_normal(q).dot(q) > 0.0);  // points away from the interior
  }

  auto quartic = make_implicit(2, quartic_ball());
  CHECK((quartic->outward_normal(vec3(1, 0, 0)) - vec3(1, 0, 0)).norm() <= 1e-10);
}

TEST_CASE("off-surface points are rejected") {
  auto body = make_sphere(2, 1.0);
  CHECK_THROWS_AS(body->outward_normal(vec3(2, 0, 0)), OffSurfaceError);
  CHECK_THROWS_AS(body->tangent_basis(vec3(0.5, 0, 0)), OffSurfaceError);
}

TEST_CASE("analytic normals match finite differences of the residual") {
  Rng rng(13);
  auto sphere = make_sphere(2, 1.25);
  auto ell = make_ellipsoid({1.4, 1.0, 0.7});
  for (const auto& body : {sphere, ell}) {
    for (int i = 0; i < 100; ++i) {
      const Vector p = testing::random_surface_point(*body, rng);
      const Vector fd = fd_residual_gradient(*body, p).normalized();
      CHECK((body->outward_normal(p) - fd).norm() <= 1e-6);
    }
  }
}

TEST_CASE("implicit normal matches finite differences") {
  auto quartic = make_implicit(2, quartic_ball());
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const Vector p = testing::random_surface_point(*quartic, rng);
    const Vector fd = fd_residual_gradient(*quartic, p).normalized();
    CHECK((quartic->outward_normal(p) - fd).norm() <= 1e-6);
  }
}

TEST_CASE("polynomial implicit derivatives are exact") {
  auto imp = quartic_ball();
  Rng rng(19);
  for (int i = 0; i < 10; ++i) {
    const Vector x = rng.gaussian(3);
    Vector g_expect(3);
    g_expect << 4 * x[0] * x[0] * x[0], 4 * x[1] * x[1] * x[1], 4 * x[2] * x[2] * x[2];
    CHECK((imp.grad_f(x) - g_expect).norm() <= 1e-12 * std::max(1.0, g_expect.norm()));
    Matrix h_expect = Matrix::Zero(3, 3);
    for (int d = 0; d < 3; ++d) h_expect(d, d) = 12 * x[d] * x[d];
    CHECK((imp.hess_f(x) - h_expect).norm() <= 1e-12 * std::max(1.0, h_expect.norm()));
  }
}

TEST_CASE("invalid bodies are rejected") {
  CHECK_THROWS_AS(make_sphere(0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_sphere(2, -1.0), ConfigError);
  CHECK_THROWS_AS(make_ellipsoid({1.0, 0.0, 1.0}), ConfigError);

  // A saddle-shaped zero set fails the strict convexity sampling.
  std::vector<PolyTerm> saddle = {{1.0, {2, 0, 0}},
                                  {1.0, {0, 2, 0}},
                                  {-0.2, {0, 0, 4}},
                                  {-1.0, {0, 0, 0}}};
  CHECK_THROWS_AS(make_implicit(2, polynomial_implicit(saddle)), ConfigError);
}

TEST_CASE("diameters") {
  CHECK(make_sphere(2, 1.0)->diameter() == 2.0);
  CHECK(make_ellipsoid({2.0, 1.0, 0.5})->diameter() == 4.0);
  const double d = make_implicit(2, quartic_ball())->diameter();
  CHECK(d >= 2.0);  // contains the unit sphere
  CHECK(d <= 2.0 * std::sqrt(3.0));
}

TEST_CASE("circle and ellipse in the plane (m = 1)") {
  auto circle = make_sphere(1, 1.0);
  Vector x(2);
  x << 3, 4;
  CHECK((circle->surface_project(x) - x / 5.0).norm() <= 1e-15);
  auto ellipse = make_ellipsoid({2.0, 1.0});
  Vector p(2);
  p << 2, 0;
  CHECK(ellipse->on_surface(p));
  CHECK(ellipse->tangent_basis(p).cols() == 1);
}

}  // TEST_SUITE
