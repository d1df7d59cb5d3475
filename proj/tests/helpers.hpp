#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "billiards/configuration.hpp"
#include "billiards/rng.hpp"

namespace billiards::testing {

// Finite differences of the pulled-back length functional; the independent
// check for gradient() and hessian().
inline Eigen::VectorXd fd_gradient(const Configuration& c, double h = 1e-5) {
  const int dim = c.n() * c.m();
  Eigen::VectorXd g(dim);
  for (int i = 0; i < dim; ++i) {
    Matrix step = Matrix::Zero(c.n(), c.m());
    step(i / c.m(), i % c.m()) = h;
    const double plus = neg_total_length(retract(c, step));
    step(i / c.m(), i % c.m()) = -h;
    const double minus = neg_total_length(retract(c, step));
    g[i] = (plus - minus) / (2.0 * h);
  }
  return g;
}

inline Matrix fd_hessian(const Configuration& c, double h = 1e-4) {
  const int dim = c.n() * c.m();
  Matrix H(dim, dim);
  const auto eval = [&](int i, double hi, int j, double hj) {
    Matrix step = Matrix::Zero(c.n(), c.m());
    step(i / c.m(), i % c.m()) += hi;
    step(j / c.m(), j % c.m()) += hj;
    return neg_total_length(retract(c, step));
  };
  const double f0 = neg_total_length(c);
  for (int i = 0; i < dim; ++i) {
    H(i, i) = (eval(i, h, i, 0.0) - 2.0 * f0 + eval(i, -h, i, 0.0)) / (h * h);
    for (int j = i + 1; j < dim; ++j) {
      const double v = (eval(i, h, j, h) - eval(i, h, j, -h) - eval(i, -h, j, h) +
                        eval(i, -h, j, -h)) /
                       (4.0 * h * h);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

// Largest violation of the reflection law over the free points: the outgoing
// chord direction must be the mirror image of the incoming one.
inline double reflection_law_residual(const Configuration& c) {
  double worst = 0.0;
  const int n = c.n();
  for (int j = 0; j < n; ++j) {
    Vector prev, next;
    if (c.is_closed_string()) {
      prev = (j == 0) ? c.anchor() : c.point(j - 1);
      next = (j == n - 1) ? c.anchor() : c.point(j + 1);
    } else {
      prev = c.point((j - 1 + n) % n);
      next = c.point((j + 1) % n);
    }
    const Vector u_in = (c.point(j) - prev).normalized();
    const Vector u_out = (next - c.point(j)).normalized();
    const Vector nu = c.body().outward_normal(c.point(j));
    const Vector mirrored = u_in - 2.0 * u_in.dot(nu) * nu;
    worst = std::max(worst, (u_out - mirrored).norm());
  }
  return worst;
}

inline Vector random_surface_point(const ConvexBody& body, Rng& rng) {
  Vector g = rng.gaussian(body.ambient_dim());
  while (g.norm() < 1e-8) g = rng.gaussian(body.ambient_dim());
  return body.surface_project(g.normalized());
}

inline Configuration random_admissible(std::shared_ptr<const ConvexBody> body, bool closed,
                                       int n, Rng& rng, double min_gap_scale = 0.05) {
  const double min_gap = min_gap_scale * body->diameter();
  for (int tries = 0; tries < 500; ++tries) {
    std::vector<Vector> pts;
    for (int j = 0; j < n; ++j) pts.push_back(random_surface_point(*body, rng));
    Configuration c = closed
        ? Configuration::closed_string(body, random_surface_point(*body, rng), pts)
        : Configuration::cyclic(body, pts);
    if (c.min_gap() >= min_gap) return c;
  }
  throw std::runtime_error("random_admissible: sampling failed");
}

inline std::vector<double> sorted_eigenvalues(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace billiards::testing
