#pragma once

#include <vector>

#include "billiards/configuration.hpp"

namespace billiards::sphere_oracle {

// Closed-form billiard data on the unit round sphere S^m. Closed-string
// trajectories from an anchor A come in one-parameter families: pick a unit
// vector a orthogonal to A and a turning number k, and step around the great
// circle through A and a by the angle psi_k = 2*pi*k/(n+1).
//
// Families are indexed either by the turning number k = 1..floor((n+1)/2) or
// by the Morse level p (p = 0 is the bottom of the length functional).

inline int closed_level_count(int n) { return (n + 1) / 2; }
int closed_k_for_level(int p, int n);   // k = floor((n+1)/2) - p
int closed_level_for_k(int k, int n);
double closed_angle(int k, int n);      // psi_k

// x_j = A cos(j psi_k) + a sin(j psi_k), j = 1..n, on the unit sphere whose
// dimension is inferred from A.
Configuration closed_trajectory(const Vector& anchor, const Vector& a, int k, int n);

// Value of the negative total length on the (k, n) family:
// -2(n+1) sin(pi k/(n+1)); each of the n+1 chords spans the angle psi_k.
double closed_critical_value(int k, int n);

struct SpectrumRecord {
  int n = 0;
  int k = 0;
  std::vector<double> eigenvalues;  // of Q_psi, s = 1..n
  Matrix eigenvectors;              // column s-1 is v_s, entries sin(pi j s/(n+1))
  int index = 0;
  int nullity = 0;
  double critical_value = 0.0;
};

// Spectrum of the tangential quadratic form Q_psi = tridiag(1, -2cos psi, 1):
// eigenvalues 2[cos(pi s/(n+1)) - cos(2 pi k/(n+1))].
SpectrumRecord q_form_spectrum(int k, int n);

struct ClosedHessian {
  Matrix matrix;    // (n*m) x (n*m), point-major over coordinates (mu_0..mu_{m-1})
  double psi = 0.0;
  int index = 0;    // (m-1) * index(Q_psi)
  int nullity = 0;  // (m-1) * nullity(Q_psi)
};

// Closed form of the Hessian of the negative length at a (k, n) trajectory on
// S^m: one positive-definite in-plane block plus m-1 copies of Q_psi scaled
// by 1/(2 sin(psi/2)).
ClosedHessian full_hessian_closed(int k, int n, int m);

// n-periodic critical families on S^m exist for odd n: regular n-gons in the
// central plane spanned by an orthonormal pair, with step angle
// alpha_p = (2 pi/n)((n-1)/2 - p), p = 0..(n-3)/2.
inline int periodic_level_count(int n) { return (n - 1) / 2; }
double periodic_angle(int p, int n);
Configuration periodic_family(int n, int p, const Vector& e1, const Vector& e2);
double periodic_critical_value(int p, int n);

// Total Stiefel-Whitney class of the negative bundle over the p-th critical
// level of the quotient: coefficients of (1+t)^{p(m-1)} mod 2, truncated to
// degree m-1.
std::vector<int> sw_class_negative_bundle(int p, int m);
bool negative_bundle_orientable(int p, int m);

}  // namespace billiards::sphere_oracle
