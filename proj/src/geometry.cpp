#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "billiards/rng.hpp"

namespace billiards {

namespace {

constexpr int kImplicitProjectCap = 50;

double pow_int(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

ImplicitConvex polynomial_implicit(std::vector<PolyTerm> terms) {
  if (terms.empty()) throw BadInputError("polynomial_implicit: empty term list");
  const std::size_t dim = terms.front().powers.size();
  for (const auto& t : terms) {
    if (t.powers.size() != dim)
      throw BadInputError("polynomial_implicit: inconsistent term dimensions");
    for (int e : t.powers)
      if (e < 0) throw BadInputError("polynomial_implicit: negative exponent");
  }
  auto shared = std::make_shared<std::vector<PolyTerm>>(std::move(terms));

  ImplicitConvex out;
  out.f = [shared](const Vector& x) {
    double v = 0.0;
    for (const auto& t : *shared) {
      double mono = t.coeff;
      for (int i = 0; i < x.size(); ++i) mono *= pow_int(x[i], t.powers[i]);
      v += mono;
    }
    return v;
  };
  out.grad_f = [shared](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (const auto& t : *shared) {
      for (int d = 0; d < x.size(); ++d) {
        if (t.powers[d] == 0) continue;
        double mono = t.coeff * t.powers[d];
        for (int i = 0; i < x.size(); ++i) {
          const int e = (i == d) ? t.powers[i] - 1 : t.powers[i];
          mono *= pow_int(x[i], e);
        }
        g[d] += mono;
      }
    }
    return g;
  };
  out.hess_f = [shared](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (const auto& t : *shared) {
      for (int d1 = 0; d1 < x.size(); ++d1) {
        if (t.powers[d1] == 0) continue;
        for (int d2 = 0; d2 < x.size(); ++d2) {
          const int e2 = t.powers[d2] - (d1 == d2 ? 1 : 0);
          if (e2 <= 0 && t.powers[d2] == 0) continue;
          double factor = t.powers[d1] * (d1 == d2 ? t.powers[d2] - 1 : t.powers[d2]);
          if (factor == 0) continue;
          double mono = t.coeff * factor;
          for (int i = 0; i < x.size(); ++i) {
            int e = t.powers[i];
            if (i == d1) --e;
            if (i == d2) --e;
            mono *= pow_int(x[i], e);
          }
          h(d1, d2) += mono;
        }
      }
    }
    return h;
  };
  return out;
}

ConvexBody::ConvexBody(int dim_m, Sphere shape, double tolerance)
    : kind_(Kind::kSphere),
      kind_name_("sphere"),
      dim_m_(dim_m),
      tolerance_(tolerance),
      radius_(shape.radius) {
  if (dim_m_ < 1) throw ConfigError("sphere: dim_m must be >= 1");
  if (!(radius_ > 0.0)) throw ConfigError("sphere: radius must be positive");
  if (!(tolerance_ > 0.0)) throw ConfigError("sphere: tolerance must be positive");
  diameter_ = 2.0 * radius_;
}

ConvexBody::ConvexBody(Ellipsoid shape, double tolerance)
    : kind_(Kind::kEllipsoid),
      kind_name_("ellipsoid"),
      tolerance_(tolerance),
      semi_axes_(std::move(shape.semi_axes)) {
  if (semi_axes_.size() < 2) throw ConfigError("ellipsoid: need at least two semi-axes");
  for (int i = 0; i < semi_axes_.size(); ++i)
    if (!(semi_axes_[i] > 0.0)) throw ConfigError("ellipsoid: semi-axes must be positive");
  if (!(tolerance_ > 0.0)) throw ConfigError("ellipsoid: tolerance must be positive");
  dim_m_ = static_cast<int>(semi_axes_.size()) - 1;
  diameter_ = 2.0 * semi_axes_.maxCoeff();
}

ConvexBody::ConvexBody(int dim_m, ImplicitConvex shape, double tolerance,
                       int check_samples, std::uint64_t check_seed)
    : kind_(Kind::kImplicit),
      kind_name_("implicit"),
      dim_m_(dim_m),
      tolerance_(tolerance),
      implicit_(std::move(shape)) {
  if (dim_m_ < 1) throw ConfigError("implicit: dim_m must be >= 1");
  if (!(tolerance_ > 0.0)) throw ConfigError("implicit: tolerance must be positive");
  if (!implicit_.f || !implicit_.grad_f || !implicit_.hess_f)
    throw ConfigError("implicit: f, grad_f and hess_f are all required");

  const double f0 = implicit_.f(Vector::Zero(ambient_dim()));
  if (f0 == 0.0) throw ConfigError("implicit: origin lies on the surface");
  // f < 0 inside is the convention; accept the flipped sign as well.
  orientation_ = (f0 < 0.0) ? 1.0 : -1.0;

  verify_implicit(check_samples, check_seed);
}

void ConvexBody::verify_implicit(int samples, std::uint64_t seed) {
  Rng rng(seed);
  const int d = ambient_dim();
  double max_r = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector u = rng.gaussian(d);
    const double nu = u.norm();
    if (nu < 1e-12) continue;
    u /= nu;
    Vector p;
    try {
      p = project_implicit(u);
    } catch (const Error&) {
      throw ConfigError("implicit: projection failed while sampling the surface");
    }
    const Vector g = implicit_.grad_f(p);
    if (g.norm() < 1e-10)
      throw ConfigError("implicit: gradient vanishes on the zero set");
    if (orientation_ * g.dot(p) <= 0.0)
      throw ConfigError("implicit: surface is not star-shaped about the origin");
    // Tangential part of the defining Hessian must be positive definite.
    const Matrix B = [&] {
      Vector nrm = orientation_ * g.normalized();
      Eigen::HouseholderQR<Matrix> qr(nrm);
      Matrix q = qr.householderQ();
      return Matrix(q.rightCols(d - 1));
    }();
    const Matrix ht = B.transpose() * (orientation_ * implicit_.hess_f(p)) * B;
    Eigen::SelfAdjointEigenSolver<Matrix> es(ht);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw ConfigError("implicit: tangential Hessian not positive definite (body not strictly convex)");
    max_r = std::max(max_r, p.norm());
  }
  if (max_r == 0.0) throw ConfigError("implicit: could not sample the surface");
  diameter_ = 2.0 * max_r;
}

void ConvexBody::check_point_dim(const Vector& x) const {
  if (x.size() != ambient_dim())
    throw BadInputError("point has wrong ambient dimension");
}

double ConvexBody::residual(const Vector& x) const {
  check_point_dim(x);
  switch (kind_) {
    case Kind::kSphere:
      return x.squaredNorm() / (radius_ * radius_) - 1.0;
    case Kind::kEllipsoid: {
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) {
        const double y = x[i] / semi_axes_[i];
        s += y * y;
      }
      return s - 1.0;
    }
    case Kind::kImplicit:
      return orientation_ * implicit_.f(x);
  }
  return 0.0;
}

bool ConvexBody::on_surface(const Vector& x) const {
  return std::abs(residual(x)) <= tolerance_;
}

void ConvexBody::require_on_surface(const Vector& p) const {
  if (!on_surface(p))
    throw OffSurfaceError("point is off the surface (residual " +
                          std::to_string(residual(p)) + ")");
}

Vector ConvexBody::surface_project(const Vector& x) const {
  check_point_dim(x);
  switch (kind_) {
    case Kind::kSphere: {
      const double nx = x.norm();
      if (nx < 1e-300) throw BadInputError("surface_project: point at the center");
      return (radius_ / nx) * x;
    }
    case Kind::kEllipsoid:
      return project_ellipsoid(x);
    case Kind::kImplicit:
      return project_implicit(x);
  }
  return x;
}

// Closest point on the ellipsoid via the standard Lagrange-multiplier root
// problem: p_i = a_i^2 x_i / (a_i^2 + t), with sum (p_i/a_i)^2 = 1. The
// function is strictly decreasing in t, so a bracketed bisection is safe.
Vector ConvexBody::project_ellipsoid(const Vector& x) const {
  if (x.norm() < 1e-300) throw BadInputError("surface_project: point at the center");
  const Vector& a = semi_axes_;
  const auto value = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double denom = a[i] * a[i] + t;
      const double term = a[i] * x[i] / denom;
      s += term * term;
    }
    return s - 1.0;
  };
  const auto point_at = [&](double t) {
    Vector p(x.size());
    for (int i = 0; i < x.size(); ++i)
      p[i] = a[i] * a[i] * x[i] / (a[i] * a[i] + t);
    return p;
  };

  const double r0 = value(0.0);
  if (r0 == 0.0) return x;

  double lo, hi;
  if (r0 > 0.0) {
    lo = 0.0;
    hi = a.maxCoeff() * x.norm();
    while (value(hi) > 0.0) hi *= 2.0;
  } else {
    hi = 0.0;
    const double amin2 = a.minCoeff() * a.minCoeff();
    double step = amin2 / 2.0;
    lo = -amin2 + step;
    int tries = 0;
    while (value(lo) < 0.0) {
      step /= 2.0;
      lo = -amin2 + step;
      if (++tries > 60) {
        // Deep interior point on a flat axis: fall back to scaling onto the
        // surface; this is only reachable far from billiard iterates.
        Vector y = x;
        double s = 0.0;
        for (int i = 0; i < x.size(); ++i) {
          const double z = x[i] / a[i];
          s += z * z;
        }
        if (s <= 0.0) throw NoConvergenceError("ellipsoid projection failed");
        y /= std::sqrt(s);
        return y;
      }
    }
  }

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (value(mid) > 0.0 ? lo : hi) = mid;
  }
  Vector p = point_at(0.5 * (lo + hi));

  // Near the shortest axis the root parameter is ill-conditioned; a few
  // Newton steps along the residual gradient tighten the surface residual
  // without moving the point beyond the root-finder's own accuracy.
  for (int it = 0; it < 8; ++it) {
    const double r = residual(p);
    if (std::abs(r) <= 0.01 * tolerance_) break;
    Vector g(p.size());
    for (int i = 0; i < p.size(); ++i) g[i] = 2.0 * p[i] / (a[i] * a[i]);
    const double g2 = g.squaredNorm();
    if (g2 < 1e-24) break;
    p -= (r / g2) * g;
  }
  if (std::abs(residual(p)) > tolerance_)
    throw NoConvergenceError("ellipsoid projection did not reach tolerance");
  return p;
}

Vector ConvexBody::project_implicit(const Vector& x) const {
  Vector p = x;
  // Drive the residual well below the acceptance tolerance; smooth
  // derivatives of retracted quantities need the projection at full
  // precision, not merely within the on-surface band.
  const double target = std::min(tolerance_, 1e-14);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kImplicitProjectCap; ++it) {
    const double v = implicit_.f(p);
    const double av = std::abs(v);
    if (av <= target) return p;
    if (av >= prev && av <= tolerance_) return p;  // roundoff plateau
    prev = av;
    const Vector g = implicit_.grad_f(p);
    const double g2 = g.squaredNorm();
    if (g2 < 1e-24)
      throw NoConvergenceError("implicit projection: vanishing gradient");
    p -= (v / g2) * g;
  }
  if (std::abs(residual(p)) <= tolerance_) return p;
  throw NoConvergenceError("implicit projection did not converge in 50 iterations");
}

Vector ConvexBody::outward_normal(const Vector& p) const {
  check_point_dim(p);
  require_on_surface(p);
  switch (kind_) {
    case Kind::kSphere:
      return p.normalized();
    case Kind::kEllipsoid: {
      Vector g(p.size());
      for (int i = 0; i < p.size(); ++i) g[i] = p[i] / (semi_axes_[i] * semi_axes_[i]);
      return g.normalized();
    }
    case Kind::kImplicit: {
      Vector g = orientation_ * implicit_.grad_f(p);
      const double n = g.norm();
      if (n < 1e-14) throw NoConvergenceError("outward_normal: vanishing gradient");
      return g / n;
    }
  }
  return p;
}

Matrix ConvexBody::tangent_basis(const Vector& p) const {
  const Vector nu = outward_normal(p);  // also validates on-surface
  const int d = ambient_dim();
  Eigen::HouseholderQR<Matrix> qr{Matrix(nu)};
  Matrix q = qr.householderQ();
  return q.rightCols(d - 1);
}

Matrix ConvexBody::shape_quadratic(const Vector& p) const {
  check_point_dim(p);
  require_on_surface(p);
  const int d = ambient_dim();
  switch (kind_) {
    case Kind::kSphere:
      return Matrix::Identity(d, d) / radius_;
    case Kind::kEllipsoid: {
      Vector g(d);
      for (int i = 0; i < d; ++i) g[i] = 2.0 * p[i] / (semi_axes_[i] * semi_axes_[i]);
      Matrix h = Matrix::Zero(d, d);
      for (int i = 0; i < d; ++i) h(i, i) = 2.0 / (semi_axes_[i] * semi_axes_[i]);
      return h / g.norm();
    }
    case Kind::kImplicit: {
      const Vector g = orientation_ * implicit_.grad_f(p);
      return (orientation_ * implicit_.hess_f(p)) / g.norm();
    }
  }
  return Matrix::Zero(d, d);
}

std::shared_ptr<const ConvexBody> make_sphere(int dim_m, double radius, double tolerance) {
  return std::make_shared<const ConvexBody>(dim_m, Sphere{radius}, tolerance);
}

std::shared_ptr<const ConvexBody> make_ellipsoid(std::vector<double> semi_axes,
                                                 double tolerance) {
  Ellipsoid e;
  e.semi_axes = Eigen::Map<Vector>(semi_axes.data(), static_cast<long>(semi_axes.size()));
  return std::make_shared<const ConvexBody>(std::move(e), tolerance);
}

std::shared_ptr<const ConvexBody> make_implicit(int dim_m, ImplicitConvex shape,
                                                double tolerance) {
  return std::make_shared<const ConvexBody>(dim_m, std::move(shape), tolerance);
}

}  // namespace billiards
