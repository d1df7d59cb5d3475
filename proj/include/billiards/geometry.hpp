#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "billiards/errors.hpp"

namespace billiards {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Sphere {
  double radius = 1.0;
};

struct Ellipsoid {
  Vector semi_axes;  // one positive entry per ambient coordinate
};

// Implicit surface {f = 0} with f < 0 inside the body.
struct ImplicitConvex {
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad_f;
  std::function<Matrix(const Vector&)> hess_f;
};

struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> powers;  // exponent per ambient coordinate
};

// Builds f, grad f and hess f for a multivariate polynomial given as a term
// list. Used for implicit bodies defined in config files.
ImplicitConvex polynomial_implicit(std::vector<PolyTerm> terms);

// Closed strictly convex hypersurface X in R^{m+1} together with the
// differential data the length functional needs: projection onto X, outward
// unit normal, orthonormal tangent frames, and the shape quadratic.
//
// Strict convexity of implicit bodies is verified by sampling at
// construction; a failed check throws ConfigError. The origin must lie in
// the interior (it fixes the orientation of "outward").
class ConvexBody {
 public:
  ConvexBody(int dim_m, Sphere shape, double tolerance = 1e-12);
  explicit ConvexBody(Ellipsoid shape, double tolerance = 1e-12);
  ConvexBody(int dim_m, ImplicitConvex shape, double tolerance = 1e-10,
             int check_samples = 1000, std::uint64_t check_seed = 7);

  int dim_m() const { return dim_m_; }
  int ambient_dim() const { return dim_m_ + 1; }
  double tolerance() const { return tolerance_; }
  double diameter() const { return diameter_; }
  const std::string& kind_name() const { return kind_name_; }

  // Dimensionless defining-function value: 0 on X, negative inside.
  double residual(const Vector& x) const;
  bool on_surface(const Vector& x) const;

  // Returns the point of X met by projecting x. Spheres and ellipsoids use
  // the metric (closest point) projection; implicit bodies use Newton along
  // the gradient line, capped at 50 iterations.
  Vector surface_project(const Vector& x) const;

  Vector outward_normal(const Vector& p) const;

  // (m+1) x m matrix whose columns form an orthonormal basis of T_p X.
  Matrix tangent_basis(const Vector& p) const;

  // Quadratic form Q with <u, S v> = u^T Q v for tangent u, v, where S is
  // the shape operator at p with respect to the outward normal.
  Matrix shape_quadratic(const Vector& p) const;

 private:
  enum class Kind { kSphere, kEllipsoid, kImplicit };

  void check_point_dim(const Vector& x) const;
  void require_on_surface(const Vector& p) const;
  Vector project_ellipsoid(const Vector& x) const;
  Vector project_implicit(const Vector& x) const;
  void verify_implicit(int samples, std::uint64_t seed);

  Kind kind_;
  std::string kind_name_;
  int dim_m_ = 0;
  double tolerance_ = 1e-12;
  double diameter_ = 0.0;

  double radius_ = 1.0;       // sphere
  Vector semi_axes_;          // ellipsoid
  ImplicitConvex implicit_;   // implicit
  double orientation_ = 1.0;  // sign making grad f point outward
};

std::shared_ptr<const ConvexBody> make_sphere(int dim_m, double radius,
                                              double tolerance = 1e-12);
std::shared_ptr<const ConvexBody> make_ellipsoid(std::vector<double> semi_axes,
                                                 double tolerance = 1e-12);
std::shared_ptr<const ConvexBody> make_implicit(int dim_m, ImplicitConvex shape,
                                                double tolerance = 1e-10);

}  // namespace billiards
