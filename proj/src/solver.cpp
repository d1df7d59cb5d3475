#include "billiards/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "billiards/rng.hpp"

namespace billiards {

namespace {

Eigen::VectorXd flatten(const Matrix& block) {
  Eigen::VectorXd v(block.rows() * block.cols());
  for (int j = 0; j < block.rows(); ++j)
    v.segment(j * block.cols(), block.cols()) = block.row(j).transpose();
  return v;
}

Matrix unflatten(const Eigen::VectorXd& v, int n, int m) {
  Matrix block(n, m);
  for (int j = 0; j < n; ++j) block.row(j) = v.segment(j * m, m).transpose();
  return block;
}

Vector random_surface_point(const ConvexBody& body, Rng& rng) {
  for (int tries = 0; tries < 100; ++tries) {
    Vector g = rng.gaussian(body.ambient_dim());
    const double ng = g.norm();
    if (ng < 1e-8) continue;
    return body.surface_project(g / ng);
  }
  throw NoConvergenceError("random_surface_point: sampling failed");
}

// Tangential gradient of log prod |x_i - x_{i+1}|, used by the boundary test
// and by deflation distances.
Eigen::VectorXd log_gap_product_gradient(const Configuration& c) {
  const int n = c.n();
  const int d = c.body().ambient_dim();
  std::vector<Vector> amb(static_cast<std::size_t>(n), Vector::Zero(d));
  for (const auto& [a, b] : c.chords()) {
    const Vector diff = c.endpoint(a) - c.endpoint(b);
    const double l2 = diff.squaredNorm();
    if (a >= 0) amb[static_cast<std::size_t>(a)] += diff / l2;
    if (b >= 0) amb[static_cast<std::size_t>(b)] -= diff / l2;
  }
  const auto frames = tangent_frames(c);
  Eigen::VectorXd out(n * c.m());
  for (int j = 0; j < n; ++j)
    out.segment(j * c.m(), c.m()) =
        frames[static_cast<std::size_t>(j)].transpose() * amb[static_cast<std::size_t>(j)];
  return out;
}

struct SearchOutcome {
  enum class Status { Converged, Boundary, Duplicate, Diverged } status;
  std::optional<Configuration> result;
  Certificate certificate;
};

// Distance in plain configuration space (max over per-point distances).
double config_distance(const Configuration& a, const Configuration& b) {
  double d = 0.0;
  for (int j = 0; j < a.n(); ++j)
    d = std::max(d, (a.point(j) - b.point(j)).norm());
  return d;
}

std::vector<Configuration> group_images(const Configuration& c, GroupKind group) {
  std::vector<Configuration> out;
  if (group == GroupKind::Z2) {
    out.push_back(c);
    if (c.n() > 1) out.push_back(reflect_T(c));
  } else {
    for (int r = 0; r < c.n(); ++r) {
      for (int f = 0; f < 2; ++f)
        out.push_back(dihedral_act({r, f == 1}, c));
    }
  }
  return out;
}

// Deflation of already-found critical points: a search that has entered the
// quadratic basin of a known orbit (small Newton step, small group distance)
// is cut short instead of being polished to convergence again.
struct Deflator {
  std::vector<Configuration> images;

  void add(const Configuration& c, GroupKind group) {
    for (auto& img : group_images(c, group)) images.push_back(std::move(img));
  }

  bool captured(const Configuration& c, double step_norm, double radius) const {
    if (images.empty() || step_norm > radius) return false;
    for (const auto& img : images)
      if (config_distance(img, c) <= radius) return true;
    return false;
  }
};

SearchOutcome newton_search(Configuration c, const SolverSettings& s,
                            const Deflator* deflator) {
  SearchOutcome out{SearchOutcome::Status::Diverged, std::nullopt, {}};
  const int n = c.n();
  const int m = c.m();
  const double coincide = kCoincidenceScale * c.body().diameter() * 100.0;
  double trust = s.trust_radius;

  for (int iter = 0; iter < s.max_iter; ++iter) {
    if (c.min_gap() < coincide || c.gap_product() < s.eps) {
      out.status = SearchOutcome::Status::Boundary;
      out.result = c;
      return out;
    }
    const Eigen::VectorXd g = flatten(gradient(c));
    const double gn = g.norm();
    if (out.certificate.residual_history.size() < 64)
      out.certificate.residual_history.push_back(gn);
    if (gn <= s.grad_tol) {
      out.status = SearchOutcome::Status::Converged;
      out.certificate.gradient_norm = gn;
      out.certificate.min_gap = c.min_gap();
      out.result = c;
      return out;
    }

    const Matrix H = hessian(c);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const double lam_max = std::max(ev.cwiseAbs().maxCoeff(), 1e-12);
    const double lam_floor = 1e-8 * lam_max;

    // Newton step on the gradient system with eigenvalues clamped away from
    // zero; converges to critical points of any signature.
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n * m);
    const Eigen::VectorXd gv = V.transpose() * g;
    for (int i = 0; i < ev.size(); ++i) {
      double lam = ev[i];
      if (std::abs(lam) < lam_floor) lam = (lam >= 0 ? lam_floor : -lam_floor);
      step -= (gv[i] / lam) * V.col(i);
    }
    const double sn = step.norm();
    if (deflator && deflator->captured(c, sn, 10.0 * s.merge_tol)) {
      out.status = SearchOutcome::Status::Duplicate;
      out.result = c;
      return out;
    }
    if (sn > trust) step *= trust / sn;

    bool accepted = false;
    double scale = 1.0;
    for (int bt = 0; bt < 8 && !accepted; ++bt, scale *= 0.5) {
      std::optional<Configuration> cand;
      try {
        cand = retract(c, unflatten(scale * step, n, m));
      } catch (const Error&) {
        continue;  // projection failed on an extreme step; shrink
      }
      if (!cand->admissible()) continue;
      const double gn_new = flatten(gradient(*cand)).norm();
      if (gn_new <= gn * 0.9999 || iter < s.descent_iters || gn_new <= 10 * s.grad_tol) {
        c = std::move(*cand);
        accepted = true;
      }
    }
    if (!accepted) {
      trust *= 0.25;
      if (trust < 1e-12 * c.body().diameter()) break;
    }
  }
  out.result = c;
  return out;
}

std::vector<long long> snap_points(const Configuration& c, double grid) {
  std::vector<long long> out;
  out.reserve(static_cast<std::size_t>(c.n() * c.body().ambient_dim()));
  for (const auto& p : c.points())
    for (int i = 0; i < p.size(); ++i)
      out.push_back(std::llround(p[i] / grid));
  return out;
}

}  // namespace

SolverSettings SolverSettings::resolved(const ConvexBody& body, int n) const {
  SolverSettings r = *this;
  if (r.starts <= 0) r.starts = 200 * n * body.dim_m();
  if (r.eps <= 0.0) r.eps = default_epsilon(body, n);
  if (r.trust_radius <= 0.0) r.trust_radius = 0.25 * body.diameter();
  if (r.merge_tol <= 0.0) r.merge_tol = 1e-6 * body.diameter();
  if (r.snap_grid <= 0.0) r.snap_grid = 1e-7 * body.diameter();
  return r;
}

Classification classify(const Configuration& c, double grad_tol, double null_threshold) {
  const double gn = flatten(gradient(c)).norm();
  if (gn > grad_tol)
    throw NotCriticalError("classify: gradient norm " + std::to_string(gn) +
                           " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hessian(c));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = null_threshold * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Classification out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -cut)
      ++out.morse_index;
    else if (ev[i] <= cut)
      ++out.nullity;
  }
  out.is_generic = (out.nullity == 0);
  return out;
}

BoundaryVerdict boundary_filter(const Configuration& c, double eps) {
  const double p = c.gap_product();
  if (p >= 1.1 * eps) return BoundaryVerdict::Keep;  // interior
  if (p < 0.9 * eps) return BoundaryVerdict::Reject; // outside the truncation
  // On the boundary band: reject when the gradient of the length functional
  // points toward smaller gap products (outward).
  const Eigen::VectorXd g = flatten(gradient(c));
  const Eigen::VectorXd q = log_gap_product_gradient(c);
  return g.dot(q) < 0.0 ? BoundaryVerdict::Reject : BoundaryVerdict::Keep;
}

Configuration refine_critical(const Configuration& start, const SolverSettings& settings) {
  const SolverSettings s = settings.resolved(start.body(), start.n());
  auto outcome = newton_search(start, s, nullptr);
  if (outcome.status != SearchOutcome::Status::Converged)
    throw NoConvergenceError("refine_critical: no critical point reached");
  return *outcome.result;
}

double group_distance(const Configuration& a, const Configuration& b, GroupKind group) {
  if (a.n() != b.n()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& img : group_images(a, group))
    best = std::min(best, config_distance(img, b));
  return best;
}

std::vector<long long> canonical_form(const Configuration& c, GroupKind group,
                                      double snap_grid) {
  std::vector<long long> best;
  for (const auto& img : group_images(c, group)) {
    auto key = snap_points(img, snap_grid);
    if (best.empty() || key < best) best = std::move(key);
  }
  return best;
}

int group_orbit_size(const Configuration& c, GroupKind group, double snap_grid) {
  std::vector<std::vector<long long>> keys;
  for (const auto& img : group_images(c, group)) keys.push_back(snap_points(img, snap_grid));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return static_cast<int>(keys.size());
}

std::vector<CriticalOrbit> deduplicate(std::vector<CriticalOrbit> orbits,
                                       GroupKind group, double merge_tol) {
  std::vector<CriticalOrbit> out;
  for (auto& orbit : orbits) {
    bool dup = false;
    for (const auto& kept : out) {
      if (orbit.canonical_form == kept.canonical_form ||
          group_distance(orbit.representative, kept.representative, group) <= merge_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(orbit));
  }
  return out;
}

namespace {

SolveReport solve_common(std::shared_ptr<const ConvexBody> body,
                         std::optional<Vector> anchor, int n,
                         const SolverSettings& raw_settings) {
  const GroupKind group = anchor ? GroupKind::Z2 : GroupKind::Dn;
  const SolverSettings s = raw_settings.resolved(*body, n);
  SolveReport report;
  report.settings = s;

  Rng rng(s.seed);
  Deflator deflator;
  std::vector<CriticalOrbit> found;

  const int d = body->ambient_dim();
  const double min_start_gap = 5e-3 * body->diameter();

  // Uniform product sampling covers the bulk of the space; polygon seeds on
  // random planar sections cover configurations with extreme winding, which
  // uniform tuples essentially never produce (for plane billiards those live
  // in separate connected components).
  const auto uniform_start = [&]() -> std::vector<Vector> {
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) pts.push_back(random_surface_point(*body, rng));
    return pts;
  };
  const auto polygon_start = [&]() -> std::vector<Vector> {
    Vector e1, e2;
    if (anchor) {
      e1 = anchor->normalized();
    } else {
      e1 = rng.gaussian(d);
      while (e1.norm() < 1e-8) e1 = rng.gaussian(d);
      e1.normalize();
    }
    e2 = rng.gaussian(d);
    e2 -= e2.dot(e1) * e1;
    while (e2.norm() < 1e-8) {
      e2 = rng.gaussian(d);
      e2 -= e2.dot(e1) * e1;
    }
    e2.normalize();
    const int gaps = anchor ? n + 1 : n;
    const int max_winding = anchor ? n : std::max(1, n - 1);
    const int w = std::min(max_winding, 1 + static_cast<int>(rng.uniform01() * max_winding));
    std::vector<double> gap(static_cast<std::size_t>(gaps));
    double total = 0.0;
    for (double& gv : gap) total += (gv = 0.05 + rng.uniform01());
    const double scale = 2.0 * M_PI * w / total;
    const double phase = anchor ? 0.0 : 2.0 * M_PI * rng.uniform01();
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(n));
    double phi = phase;
    const double jitter = 0.03 * body->diameter();
    for (int j = 0; j < n; ++j) {
      phi += gap[static_cast<std::size_t>(j)] * scale;
      Vector x = std::cos(phi) * e1 + std::sin(phi) * e2;
      x *= 0.5 * body->diameter();
      x += jitter * rng.gaussian(d);
      if (x.norm() < 1e-8) x = e1;
      pts.push_back(body->surface_project(x));
    }
    return pts;
  };
  const auto make_start = [&](int index) -> Configuration {
    for (int attempt = 0; attempt < 200; ++attempt) {
      try {
        auto pts = (index % 2 == 0) ? uniform_start() : polygon_start();
        Configuration c = anchor
                              ? Configuration::closed_string(body, *anchor, std::move(pts))
                              : Configuration::cyclic(body, std::move(pts));
        if (c.min_gap() >= min_start_gap) return c;
      } catch (const Error&) {
        // rejected sample (projection failure on a wild jitter); retry
      }
    }
    throw NoConvergenceError("solve: could not sample an admissible start");
  };

  for (int start = 0; start < s.starts; ++start) {
    ++report.starts_attempted;
    Configuration c0 = make_start(start);
    auto outcome = newton_search(c0, s, s.deflation ? &deflator : nullptr);
    if (outcome.status == SearchOutcome::Status::Boundary) {
      ++report.rejected_boundary;
      continue;
    }
    if (outcome.status == SearchOutcome::Status::Duplicate) {
      ++report.rejected_duplicate;
      continue;
    }
    if (outcome.status != SearchOutcome::Status::Converged) {
      ++report.diverged;
      continue;
    }
    Configuration c = *outcome.result;
    ++report.converged;
    if (boundary_filter(c, s.eps) == BoundaryVerdict::Reject) {
      ++report.rejected_boundary;
      continue;
    }

    bool dup = false;
    for (const auto& kept : found) {
      if (group_distance(c, kept.representative, group) <= s.merge_tol) {
        dup = true;
        break;
      }
    }
    if (dup) {
      ++report.rejected_duplicate;
      continue;
    }

    CriticalOrbit orbit{.representative = c};
    orbit.length = -neg_total_length(c);
    const auto cls = classify(c, 100.0 * s.grad_tol, s.null_threshold);
    orbit.morse_index = cls.morse_index;
    orbit.nullity = cls.nullity;
    orbit.degenerate = cls.nullity > 0;
    orbit.orbit_kind = group;
    orbit.orbit_size = group_orbit_size(c, group, s.snap_grid);
    orbit.certificate = outcome.certificate;
    orbit.canonical_form = canonical_form(c, group, s.snap_grid);
    found.push_back(std::move(orbit));
    if (s.deflation) deflator.add(c, group);
  }

  // Split isolated orbits from degenerate families; families are merged by
  // critical value (and matching index/nullity).
  std::sort(found.begin(), found.end(), [](const CriticalOrbit& a, const CriticalOrbit& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.canonical_form < b.canonical_form;
  });
  for (auto& orbit : found) {
    if (!orbit.degenerate) {
      report.orbits.push_back(std::move(orbit));
      continue;
    }
    bool merged = false;
    for (auto& fam : report.families) {
      if (fam.morse_index == orbit.morse_index && fam.nullity == orbit.nullity &&
          std::abs(fam.length - orbit.length) <= 1e-6 * (1.0 + std::abs(fam.length))) {
        ++fam.family_points;
        merged = true;
        break;
      }
    }
    if (!merged) report.families.push_back(std::move(orbit));
  }
  return report;
}

}  // namespace

SolveReport solve_closed(std::shared_ptr<const ConvexBody> body, const Vector& anchor,
                         int n, const SolverSettings& settings) {
  if (n < 1) throw BadInputError("solve_closed: n must be >= 1");
  if (!body->on_surface(anchor))
    throw BadInputError("solve_closed: anchor must lie on the surface");
  return solve_common(std::move(body), anchor, n, settings);
}

SolveReport solve_periodic(std::shared_ptr<const ConvexBody> body, int n,
                           const SolverSettings& settings) {
  if (n < 2) throw BadInputError("solve_periodic: n must be >= 2");
  return solve_common(std::move(body), std::nullopt, n, settings);
}

}  // namespace billiards
