#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "billiards/errors.hpp"

namespace billiards {

enum class Coeffs { Z, Q, Z2 };

std::string coeffs_name(Coeffs c);
Coeffs coeffs_from_name(const std::string& name);

struct BasisElement {
  std::string name;
  int degree = 0;
  long long order = 0;  // additive order: 0 = infinite, otherwise a positive integer
};

// Finitely generated graded-commutative ring presented by an explicit
// additive basis and exact integer structure constants. All products of two
// basis elements are integer multiples of a single basis element, which is
// what every ring in this toolkit looks like.
class GradedRing {
 public:
  struct Term {
    int k = -1;         // target basis index, -1 = zero
    long long c = 0;
  };

  Coeffs coeffs = Coeffs::Z;
  std::string space;          // "closed-string", "quotient", "cyclic"
  int m = 0;
  int n = 0;
  std::vector<BasisElement> basis;   // index 0 is the unit
  std::vector<int> generators;       // basis indices of positive-degree generators
  std::vector<std::vector<Term>> table;  // table[i][j] = basis_i * basis_j
  bool field_unverified = false;  // coefficients beyond the established statement

  int basis_size() const { return static_cast<int>(basis.size()); }
  int find(const std::string& name) const;  // -1 if absent
  int top_degree() const;

  // Additive data per degree. For integral rings the Z2 dimension follows
  // the universal coefficient rule rank + torsion(d) + torsion(d+1).
  int rank_in_degree(int d) const;
  int torsion_in_degree(int d) const;
  int z2_dim(int d) const;
  int q_dim(int d) const;

  long long reduce(int basis_index, long long coeff) const;
};

// Element as a sparse integer combination of basis monomials.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(const GradedRing* ring) : ring_(ring) {}
  static RingElement basis(const GradedRing& ring, int index, long long coeff = 1);
  static RingElement basis(const GradedRing& ring, const std::string& name,
                           long long coeff = 1);

  const GradedRing* ring() const { return ring_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<int, long long>& coeffs() const { return coeffs_; }
  long long coeff(int basis_index) const;

  RingElement operator+(const RingElement& other) const;
  RingElement operator-(const RingElement& other) const;
  RingElement operator*(const RingElement& other) const;
  RingElement scaled(long long s) const;
  bool operator==(const RingElement& other) const;

  std::string to_string() const;

 private:
  void set(int index, long long c);

  const GradedRing* ring_ = nullptr;
  std::map<int, long long> coeffs_;
};

// H^*(G(S^m; A, A, n)): free of rank one in degrees i(m-1), i = 0..n-1, with
// generator products given by binomial coefficients (parity of m decides the
// exact rule). m must be at least 2.
GradedRing closed_string_ring(int m, int n, Coeffs coeffs = Coeffs::Z);

// Degree-preserving involution induced by orientation reversal; diagonal
// signs on the sigma basis.
struct ReflectionAction {
  std::vector<long long> sign;  // per basis index, +1 or -1
  RingElement apply(const RingElement& x) const;
};
ReflectionAction reflection_action(const GradedRing& ring);

// Integral cohomology ring of the free Z2 quotient (n even): delta/e
// generators for odd m; delta/e/a/b for even m.
GradedRing quotient_ring(int m, int n);

// Z2 Poincare polynomial of the quotient: coefficient vector of
// (t^m - 1)/(t - 1) * (t^{n(m-1)} - 1)/(t^{2(m-1)} - 1).
std::vector<long long> poincare_polynomial_quotient(int m, int n);

// Cohomology of the cyclic configuration space G(S^m, n). For odd m the ring
// has generators u (degree m, square zero) and sigma_1..sigma_{n-2}; the
// stated coefficient field is Q, other choices are exposed with the
// field_unverified flag set. For even m (odd n only) the generators are w
// (degree 2m-1, square zero) and sigma_{2i}, over a field of characteristic
// different from 2.
GradedRing cyclic_ring(int m, int n, Coeffs coeffs = Coeffs::Q);

// Longest nonzero product of positive-degree generators.
int cup_length(const GradedRing& ring);

// The witness product for that cup length (empty when cup length is 0).
std::vector<std::string> cup_length_witness(const GradedRing& ring);

}  // namespace billiards
