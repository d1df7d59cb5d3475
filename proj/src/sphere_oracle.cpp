#include "billiards/sphere_oracle.hpp"

#include <cmath>

namespace billiards::sphere_oracle {

namespace {

void check_closed_kn(int k, int n) {
  if (n < 1) throw BadInputError("sphere oracle: n must be >= 1");
  if (k < 1 || k > (n + 1) / 2)
    throw BadInputError("sphere oracle: k must lie in 1..floor((n+1)/2)");
}

void check_unit_pair(const Vector& A, const Vector& a) {
  constexpr double tol = 1e-10;
  if (A.size() != a.size()) throw BadInputError("sphere oracle: dimension mismatch");
  if (A.size() < 2) throw BadInputError("sphere oracle: ambient dimension must be >= 2");
  if (std::abs(A.norm() - 1.0) > tol || std::abs(a.norm() - 1.0) > tol)
    throw BadInputError("sphere oracle: anchor and direction must be unit vectors");
  if (std::abs(A.dot(a)) > tol)
    throw BadInputError("sphere oracle: direction must be orthogonal to the anchor");
}

}  // namespace

int closed_k_for_level(int p, int n) {
  const int k = (n + 1) / 2 - p;
  check_closed_kn(k, n);
  return k;
}

int closed_level_for_k(int k, int n) {
  check_closed_kn(k, n);
  return (n + 1) / 2 - k;
}

double closed_angle(int k, int n) {
  check_closed_kn(k, n);
  return 2.0 * M_PI * k / (n + 1);
}

Configuration closed_trajectory(const Vector& anchor, const Vector& a, int k, int n) {
  check_closed_kn(k, n);
  check_unit_pair(anchor, a);
  const int m = static_cast<int>(anchor.size()) - 1;
  const double psi = closed_angle(k, n);
  auto body = make_sphere(m, 1.0);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    Vector x = std::cos(j * psi) * anchor + std::sin(j * psi) * a;
    pts.push_back(body->surface_project(x));
  }
  return Configuration::closed_string(std::move(body), anchor, std::move(pts));
}

double closed_critical_value(int k, int n) {
  check_closed_kn(k, n);
  // Each chord subtends the angle psi_k, so its length is 2 sin(psi_k / 2).
  return -2.0 * (n + 1) * std::sin(M_PI * k / (n + 1));
}

SpectrumRecord q_form_spectrum(int k, int n) {
  check_closed_kn(k, n);
  SpectrumRecord rec;
  rec.n = n;
  rec.k = k;
  rec.critical_value = closed_critical_value(k, n);
  const double cos_psi = std::cos(closed_angle(k, n));
  rec.eigenvalues.resize(static_cast<std::size_t>(n));
  rec.eigenvectors = Matrix(n, n);
  for (int s = 1; s <= n; ++s) {
    rec.eigenvalues[static_cast<std::size_t>(s - 1)] =
        2.0 * (std::cos(M_PI * s / (n + 1)) - cos_psi);
    for (int j = 1; j <= n; ++j)
      rec.eigenvectors(j - 1, s - 1) = std::sin(M_PI * j * s / (n + 1));
  }
  rec.index = (2 * k <= n) ? n - 2 * k : 0;
  rec.nullity = (2 * k <= n) ? 1 : 0;
  return rec;
}

ClosedHessian full_hessian_closed(int k, int n, int m) {
  check_closed_kn(k, n);
  if (m < 2) throw BadInputError("full_hessian_closed: m must be >= 2");
  const double psi = closed_angle(k, n);
  const double sin_half = std::sin(psi / 2.0);
  const double cos_psi = std::cos(psi);

  ClosedHessian out;
  out.psi = psi;
  out.matrix = Matrix::Zero(n * m, n * m);

  // Coordinate r = 0 at each point is the in-plane direction; r >= 1 are the
  // m-1 off-plane directions. Point-major layout matches hessian().
  const auto idx = [m](int j, int r) { return j * m + r; };

  // In-plane block: (1/2) sin(psi/2) * sum_{j=0}^{n} (mu_j - mu_{j+1})^2 with
  // mu_0 = mu_{n+1} = 0, i.e. tridiag(-1, 2, -1) scaled.
  for (int j = 0; j < n; ++j) {
    out.matrix(idx(j, 0), idx(j, 0)) = sin_half;
    if (j + 1 < n) {
      out.matrix(idx(j, 0), idx(j + 1, 0)) = -0.5 * sin_half;
      out.matrix(idx(j + 1, 0), idx(j, 0)) = -0.5 * sin_half;
    }
  }

  // Off-plane blocks: Q_psi / (2 sin(psi/2)) in each of the m-1 directions.
  const double c = 1.0 / (2.0 * sin_half);
  for (int r = 1; r < m; ++r) {
    for (int j = 0; j < n; ++j) {
      out.matrix(idx(j, r), idx(j, r)) = -2.0 * cos_psi * c;
      if (j + 1 < n) {
        out.matrix(idx(j, r), idx(j + 1, r)) = c;
        out.matrix(idx(j + 1, r), idx(j, r)) = c;
      }
    }
  }

  const SpectrumRecord q = q_form_spectrum(k, n);
  out.index = (m - 1) * q.index;
  out.nullity = (m - 1) * q.nullity;
  return out;
}

double periodic_angle(int p, int n) {
  if (n < 3 || n % 2 == 0) throw BadInputError("periodic oracle: n must be odd and >= 3");
  if (p < 0 || p > (n - 3) / 2)
    throw BadInputError("periodic oracle: p must lie in 0..(n-3)/2");
  return (2.0 * M_PI / n) * ((n - 1) / 2 - p);
}

Configuration periodic_family(int n, int p, const Vector& e1, const Vector& e2) {
  const double alpha = periodic_angle(p, n);
  check_unit_pair(e1, e2);
  const int m = static_cast<int>(e1.size()) - 1;
  if (m < 1) throw BadInputError("periodic oracle: ambient dimension must be >= 2");
  auto body = make_sphere(m, 1.0);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Vector x = std::cos(j * alpha) * e1 + std::sin(j * alpha) * e2;
    pts.push_back(body->surface_project(x));
  }
  return Configuration::cyclic(std::move(body), std::move(pts));
}

double periodic_critical_value(int p, int n) {
  const double alpha = periodic_angle(p, n);
  return -2.0 * n * std::sin(alpha / 2.0);
}

std::vector<int> sw_class_negative_bundle(int p, int m) {
  if (p < 0 || m < 2) throw BadInputError("sw_class: need p >= 0 and m >= 2");
  // Coefficients of (1+t)^{p(m-1)} mod 2 up to degree m-1 (Pascal mod 2).
  const int e = p * (m - 1);
  std::vector<int> row{1};
  for (int i = 0; i < e; ++i) {
    std::vector<int> next(std::min<std::size_t>(row.size() + 1, static_cast<std::size_t>(m)), 0);
    for (std::size_t j = 0; j < next.size(); ++j) {
      int v = (j < row.size() ? row[j] : 0) ^ (j >= 1 && j - 1 < row.size() ? row[j - 1] : 0);
      next[j] = v;
    }
    row = std::move(next);
  }
  row.resize(static_cast<std::size_t>(m), 0);
  return row;
}

bool negative_bundle_orientable(int p, int m) {
  const auto sw = sw_class_negative_bundle(p, m);
  return sw[1] == 0;  // first Stiefel-Whitney class p(m-1) mod 2
}

}  // namespace billiards::sphere_oracle
