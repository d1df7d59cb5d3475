#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "billiards/geometry.hpp"

namespace billiards {

// Relative threshold (times body diameter) under which two consecutive
// points are considered coincident, i.e. the configuration inadmissible.
constexpr double kCoincidenceScale = 1e-14;

// Tangent data in frame coordinates: row j holds the m coefficients of the
// block at x_j with respect to tangent_frames(c)[j].
using TangentVector = Matrix;

struct DihedralElement {
  int rotation = 0;  // left shift amount, 0..n-1
  bool flip = false; // flip fixes x_1 and reverses the rest, applied first
};

// g1 composed with g2: act(compose(g1,g2), c) == act(g1, act(g2, c)).
DihedralElement dihedral_compose(const DihedralElement& g1, const DihedralElement& g2, int n);

// Ordered tuple of boundary points, either anchored ("closed string": the
// chain A, x_1, ..., x_n, A) or cyclic (x_1, ..., x_n, x_1). Immutable.
class Configuration {
 public:
  static Configuration closed_string(std::shared_ptr<const ConvexBody> body,
                                     Vector anchor, std::vector<Vector> points);
  static Configuration cyclic(std::shared_ptr<const ConvexBody> body,
                              std::vector<Vector> points);

  const ConvexBody& body() const { return *body_; }
  std::shared_ptr<const ConvexBody> body_ptr() const { return body_; }
  bool is_closed_string() const { return anchor_.has_value(); }
  const Vector& anchor() const;
  int n() const { return static_cast<int>(points_.size()); }
  int m() const { return body_->dim_m(); }
  const std::vector<Vector>& points() const { return points_; }
  const Vector& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

  // Chords as index pairs into points(); -1 denotes the anchor.
  std::vector<std::pair<int, int>> chords() const;
  const Vector& endpoint(int index) const;  // -1 -> anchor

  double min_gap() const;
  double gap_product() const;
  bool admissible() const;
  void require_admissible() const;

  Configuration with_points(std::vector<Vector> points) const;

 private:
  Configuration(std::shared_ptr<const ConvexBody> body, std::optional<Vector> anchor,
                std::vector<Vector> points);

  std::shared_ptr<const ConvexBody> body_;
  std::optional<Vector> anchor_;
  std::vector<Vector> points_;
};

// Negative total length of the chord chain. Chord lengths are accumulated in
// sorted order so the value is invariant under the symmetry actions bit for
// bit. Throws InadmissibleError when consecutive points coincide.
double neg_total_length(const Configuration& c);

// Orthonormal tangent frame at every configuration point.
std::vector<Matrix> tangent_frames(const Configuration& c);

// Riemannian gradient of neg_total_length in tangent coordinates. All blocks
// vanish exactly at billiard trajectories (the reflection law in variational
// form).
TangentVector gradient(const Configuration& c);

// Covariant Hessian of neg_total_length in tangent coordinates, as a
// symmetric (n*m) x (n*m) matrix ordered point-major. Computed analytically
// as the ambient chord Hessian plus the shape-operator correction.
Matrix hessian(const Configuration& c);

// Moves every point by its tangent coefficient row and re-projects.
Configuration retract(const Configuration& c, const TangentVector& tangent_coeffs);

// Order reversal (closed strings only); an involution preserving length.
Configuration reflect_T(const Configuration& c);

// Dihedral action on cyclic configurations.
Configuration dihedral_act(const DihedralElement& g, const Configuration& c);

// Membership in the compact truncation: product of consecutive gaps >= eps.
bool in_G_epsilon(const Configuration& c, double eps);

// Default truncation level for a body/point-count pair.
double default_epsilon(const ConvexBody& body, int n);

}  // namespace billiards
