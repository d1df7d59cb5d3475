#include "billiards/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace billiards {

DihedralElement dihedral_compose(const DihedralElement& g1, const DihedralElement& g2, int n) {
  // With s = left rotation and f = flip we have f s f = s^{-1}, and an
  // element (r, flip) acts as s^r f^flip.
  DihedralElement out;
  out.flip = g1.flip != g2.flip;
  const int r = g1.flip ? g1.rotation - g2.rotation : g1.rotation + g2.rotation;
  out.rotation = ((r % n) + n) % n;
  return out;
}

Configuration::Configuration(std::shared_ptr<const ConvexBody> body,
                             std::optional<Vector> anchor, std::vector<Vector> points)
    : body_(std::move(body)), anchor_(std::move(anchor)), points_(std::move(points)) {
  if (!body_) throw BadInputError("configuration: null body");
  const int min_points = anchor_ ? 1 : 2;
  if (static_cast<int>(points_.size()) < min_points)
    throw BadInputError("configuration: too few points");
  if (anchor_ && !body_->on_surface(*anchor_))
    throw OffSurfaceError("configuration: anchor off the surface");
  for (const auto& p : points_)
    if (!body_->on_surface(p))
      throw OffSurfaceError("configuration: point off the surface");
}

Configuration Configuration::closed_string(std::shared_ptr<const ConvexBody> body,
                                           Vector anchor, std::vector<Vector> points) {
  return Configuration(std::move(body), std::move(anchor), std::move(points));
}

Configuration Configuration::cyclic(std::shared_ptr<const ConvexBody> body,
                                    std::vector<Vector> points) {
  return Configuration(std::move(body), std::nullopt, std::move(points));
}

const Vector& Configuration::anchor() const {
  if (!anchor_) throw WrongKindError("configuration: cyclic configuration has no anchor");
  return *anchor_;
}

std::vector<std::pair<int, int>> Configuration::chords() const {
  std::vector<std::pair<int, int>> out;
  const int k = n();
  if (is_closed_string()) {
    out.reserve(static_cast<std::size_t>(k) + 1);
    out.emplace_back(-1, 0);
    for (int i = 0; i + 1 < k; ++i) out.emplace_back(i, i + 1);
    out.emplace_back(k - 1, -1);
  } else {
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.emplace_back(i, (i + 1) % k);
  }
  return out;
}

const Vector& Configuration::endpoint(int index) const {
  return index < 0 ? anchor() : point(index);
}

double Configuration::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : chords())
    g = std::min(g, (endpoint(a) - endpoint(b)).norm());
  return g;
}

double Configuration::gap_product() const {
  double p = 1.0;
  for (const auto& [a, b] : chords())
    p *= (endpoint(a) - endpoint(b)).norm();
  return p;
}

bool Configuration::admissible() const {
  return min_gap() > kCoincidenceScale * body_->diameter();
}

void Configuration::require_admissible() const {
  if (!admissible())
    throw InadmissibleError("configuration: consecutive points coincide");
}

Configuration Configuration::with_points(std::vector<Vector> points) const {
  return Configuration(body_, anchor_, std::move(points));
}

double neg_total_length(const Configuration& c) {
  c.require_admissible();
  std::vector<double> lengths;
  for (const auto& [a, b] : c.chords())
    lengths.push_back((c.endpoint(a) - c.endpoint(b)).norm());
  // Canonical (sorted) summation order: the value is then exactly invariant
  // under reversal and dihedral relabeling.
  std::sort(lengths.begin(), lengths.end());
  double sum = 0.0;
  for (double l : lengths) sum += l;
  return -sum;
}

std::vector<Matrix> tangent_frames(const Configuration& c) {
  std::vector<Matrix> frames;
  frames.reserve(static_cast<std::size_t>(c.n()));
  for (const auto& p : c.points()) frames.push_back(c.body().tangent_basis(p));
  return frames;
}

namespace {

// Ambient Euclidean gradient of neg_total_length, one block per free point.
std::vector<Vector> ambient_gradient(const Configuration& c) {
  const int d = c.body().ambient_dim();
  std::vector<Vector> g(static_cast<std::size_t>(c.n()), Vector::Zero(d));
  for (const auto& [a, b] : c.chords()) {
    const Vector diff = c.endpoint(a) - c.endpoint(b);
    const Vector u = diff / diff.norm();
    if (a >= 0) g[static_cast<std::size_t>(a)] -= u;
    if (b >= 0) g[static_cast<std::size_t>(b)] += u;
  }
  return g;
}

}  // namespace

TangentVector gradient(const Configuration& c) {
  c.require_admissible();
  const auto g = ambient_gradient(c);
  const auto frames = tangent_frames(c);
  Matrix out(c.n(), c.m());
  for (int j = 0; j < c.n(); ++j)
    out.row(j) = (frames[static_cast<std::size_t>(j)].transpose() *
                  g[static_cast<std::size_t>(j)])
                     .transpose();
  return out;
}

Matrix hessian(const Configuration& c) {
  c.require_admissible();
  const int n = c.n();
  const int m = c.m();
  const int d = c.body().ambient_dim();
  const auto frames = tangent_frames(c);
  const auto g = ambient_gradient(c);

  // Ambient chord Hessian, assembled block-wise.
  Matrix amb = Matrix::Zero(n * d, n * d);
  for (const auto& [a, b] : c.chords()) {
    const Vector diff = c.endpoint(a) - c.endpoint(b);
    const double len = diff.norm();
    const Vector u = diff / len;
    const Matrix blk = (Matrix::Identity(d, d) - u * u.transpose()) / len;
    if (a >= 0) amb.block(a * d, a * d, d, d) -= blk;
    if (b >= 0) amb.block(b * d, b * d, d, d) -= blk;
    if (a >= 0 && b >= 0) {
      amb.block(a * d, b * d, d, d) += blk;
      amb.block(b * d, a * d, d, d) += blk;
    }
  }

  Matrix H = Matrix::Zero(n * m, n * m);
  for (int j = 0; j < n; ++j) {
    const Matrix& Bj = frames[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) {
      const Matrix& Bk = frames[static_cast<std::size_t>(k)];
      H.block(j * m, k * m, m, m) =
          Bj.transpose() * amb.block(j * d, k * d, d, d) * Bk;
    }
    // Second-fundamental-form correction: moving along the surface curves the
    // chord endpoints, contributing -<grad, normal> * <u, S v> on the diagonal.
    const Vector nu = c.body().outward_normal(c.point(j));
    const Matrix Q = c.body().shape_quadratic(c.point(j));
    const double gn = g[static_cast<std::size_t>(j)].dot(nu);
    H.block(j * m, j * m, m, m) -= gn * (Bj.transpose() * Q * Bj);
  }
  return 0.5 * (H + H.transpose());
}

Configuration retract(const Configuration& c, const TangentVector& tangent_coeffs) {
  if (tangent_coeffs.rows() != c.n() || tangent_coeffs.cols() != c.m())
    throw BadInputError("retract: coefficient block has wrong shape");
  const auto frames = tangent_frames(c);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(c.n()));
  for (int j = 0; j < c.n(); ++j) {
    const Vector step = frames[static_cast<std::size_t>(j)] *
                        tangent_coeffs.row(j).transpose();
    pts.push_back(c.body().surface_project(c.point(j) + step));
  }
  return c.with_points(std::move(pts));
}

Configuration reflect_T(const Configuration& c) {
  if (!c.is_closed_string())
    throw WrongKindError("reflect_T: defined for closed strings only");
  std::vector<Vector> pts(c.points().rbegin(), c.points().rend());
  return c.with_points(std::move(pts));
}

Configuration dihedral_act(const DihedralElement& g, const Configuration& c) {
  if (c.is_closed_string())
    throw WrongKindError("dihedral_act: defined for cyclic configurations only");
  const int n = c.n();
  std::vector<Vector> pts(static_cast<std::size_t>(n));
  // Flip first (fix x_1, reverse the rest), then rotate left.
  for (int i = 0; i < n; ++i) {
    int src = i;
    if (g.flip && i > 0) src = n - i;
    pts[static_cast<std::size_t>(i)] = c.point(src);
  }
  if (g.rotation != 0) {
    std::vector<Vector> rot(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      rot[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>((i + g.rotation) % n)];
    pts = std::move(rot);
  }
  return c.with_points(std::move(pts));
}

bool in_G_epsilon(const Configuration& c, double eps) {
  if (!(eps > 0.0)) throw BadInputError("in_G_epsilon: eps must be positive");
  return c.gap_product() >= eps;
}

double default_epsilon(const ConvexBody& body, int n) {
  return std::pow(1e-3 * body.diameter(), n);
}

}  // namespace billiards
