#include "billiards/bounds.hpp"

#include <cmath>

namespace billiards {

namespace {

int floor_log2(int n) {
  int r = 0;
  while (n > 1) {
    n /= 2;
    ++r;
  }
  return r;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string join_factors(const std::vector<std::string>& fs) {
  std::string s;
  for (const auto& f : fs) {
    if (!s.empty()) s += "*";
    s += f;
  }
  return s.empty() ? "1" : s;
}

// Multiplies the named generators in the ring and reports the product string
// plus whether the result is nonzero.
std::pair<std::string, bool> verify_product(const GradedRing& ring,
                                            const std::vector<std::string>& factors) {
  RingElement acc = RingElement::basis(ring, 0);
  for (const auto& f : factors) acc = acc * RingElement::basis(ring, f);
  return {join_factors(factors), !acc.is_zero()};
}

}  // namespace

std::string clause_name(BoundClause c) {
  switch (c) {
    case BoundClause::I: return "I";
    case BoundClause::II: return "II";
    case BoundClause::III: return "III";
    case BoundClause::Periodic: return "periodic";
  }
  return "?";
}

std::string kind_name(TrajectoryKind k) {
  return k == TrajectoryKind::ClosedFromPoint ? "closed-from-point" : "periodic";
}

bool binomial_parity_even(long long i, long long j) {
  if (i < 0 || j < 0) throw BadInputError("binomial_parity: need i, j >= 0");
  return (i & j) != 0;
}

bool is_odd_prime(int n) {
  if (n < 3 || n % 2 == 0) return false;
  for (int d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

BoundReport bound_closed(int m, int n, BoundClause clause) {
  if (m < 1) throw BadInputError("bound_closed: m must be >= 1");
  if (n < 1) throw BadInputError("bound_closed: n must be >= 1");
  BoundReport rep;
  rep.m = m;
  rep.n = n;
  rep.kind = TrajectoryKind::ClosedFromPoint;
  rep.clause = clause;

  switch (clause) {
    case BoundClause::I: {
      if (m == 1) throw BadClauseError("clause I starts at m = 2");
      rep.value = (m % 2 == 1) ? n : n / 2 + 1;
      // The value is cup-length + 1 in the string ring; record the longest
      // product as the witness.
      const auto ring = closed_string_ring(m, n);
      std::vector<std::string> factors;
      if (m % 2 == 1) {
        factors.assign(static_cast<std::size_t>(n - 1), "s1");
      } else if (n % 2 == 0) {
        factors.push_back("s1");
        for (int t = 0; t < n / 2 - 1; ++t) factors.push_back("s2");
      } else {
        for (int t = 0; t < n / 2; ++t) factors.push_back("s2");
      }
      if (factors.empty()) {
        rep.witness = "connected space";
        rep.witness_verified = true;
      } else {
        auto [w, ok] = verify_product(ring, factors);
        rep.witness = w;
        rep.witness_verified = ok;
      }
      return rep;
    }

    case BoundClause::II: {
      if (n % 2 != 0) throw BadClauseError("clause II needs even n");
      if (m == 1) throw BadClauseError("clause II starts at m = 2");
      const int log2n = floor_log2(n);
      const auto ring = quotient_ring(m, n);
      std::vector<std::string> factors;
      if (m % 2 == 1) {
        rep.value = log2n + m - 1;
        // delta_1 delta_2 delta_4 ... delta_{2^s} e^{(m-1)/2},
        // s the largest integer with 2^{s+1}-1 <= n/2 - 1.
        const int s = log2n - 2;
        for (int t = 0, pw = 1; t <= s; ++t, pw *= 2)
          factors.push_back("d" + std::to_string(pw));
        for (int t = 0; t < (m - 1) / 2; ++t) factors.push_back("e");
      } else if (n == 2) {
        rep.value = m;
        // The integral quotient ring of the n = 2 space (a projective space)
        // carries no product certifying the full value; record the longest
        // nonzero one.
        if (m == 2) {
          factors.push_back("a");
        } else {
          for (int t = 0; t < (m - 2) / 2; ++t) factors.push_back("e");
        }
      } else {
        rep.value = log2n + m - 2;
        if (is_power_of_two(n + 2)) {
          // delta_1 ... delta_{2^s} e^{(m-2)/2} with s = log2(n+2) - 3; b is
          // skipped since delta_k b = 0 at k = (n-2)/4.
          const int s = floor_log2(n + 2) - 3;
          for (int t = 0, pw = 1; t <= s; ++t, pw *= 2)
            factors.push_back("d" + std::to_string(pw));
          for (int t = 0; t < (m - 2) / 2; ++t) factors.push_back("e");
        } else {
          // delta_1 ... delta_{2^s} b e^{(m-2)/2},
          // s = floor(log2 floor((n+2)/4)) - 1.
          const int s = floor_log2((n + 2) / 4) - 1;
          for (int t = 0, pw = 1; t <= s; ++t, pw *= 2)
            factors.push_back("d" + std::to_string(pw));
          factors.push_back("b");
          for (int t = 0; t < (m - 2) / 2; ++t) factors.push_back("e");
        }
      }
      if (factors.empty()) {
        rep.witness = "connected space";
        rep.witness_verified = true;
      } else {
        auto [w, ok] = verify_product(ring, factors);
        rep.witness = w;
        rep.witness_verified = ok;
      }
      return rep;
    }

    case BoundClause::III: {
      if (n % 2 != 0) throw BadClauseError("clause III needs even n");
      if (m == 1) {
        rep.value = n / 2;
        rep.witness = "n/2 contractible components";
        rep.witness_verified = true;
        return rep;
      }
      rep.value = static_cast<long long>(m) * n / 2;
      // Sum of Z2 Betti numbers of the quotient.
      const auto ring = quotient_ring(m, n);
      long long betti = 0;
      for (int d = 0; d <= ring.top_degree() + 1; ++d) betti += ring.z2_dim(d);
      rep.witness = "Z2 Betti sum of the quotient";
      rep.witness_verified = (betti == rep.value);
      return rep;
    }

    case BoundClause::Periodic:
      throw BadClauseError("use bound_periodic for the periodic bound");
  }
  throw BadClauseError("unknown clause");
}

BoundReport bound_periodic(int m, int n) {
  if (m < 2) throw BadInputError("bound_periodic: m must be >= 2");
  if (!is_odd_prime(n)) throw BadInputError("bound_periodic: n must be an odd prime");
  BoundReport rep;
  rep.m = m;
  rep.n = n;
  rep.kind = TrajectoryKind::Periodic;
  rep.clause = BoundClause::Periodic;

  const auto ring = cyclic_ring(m, n, Coeffs::Q);
  std::vector<std::string> factors;
  if (m % 2 == 1) {
    rep.value = n;
    factors.assign(static_cast<std::size_t>(n - 2), "s1");
    factors.push_back("u");
  } else {
    rep.value = (n + 1) / 2;
    for (int t = 0; t < (n - 3) / 2; ++t) factors.push_back("s2");
    factors.push_back("w");
  }
  auto [w, ok] = verify_product(ring, factors);
  rep.witness = w;
  rep.witness_verified = ok;
  return rep;
}

std::vector<BoundReport> applicable_bounds(int m, int n) {
  std::vector<BoundReport> out;
  for (BoundClause c : {BoundClause::I, BoundClause::II, BoundClause::III}) {
    try {
      out.push_back(bound_closed(m, n, c));
    } catch (const BadClauseError&) {
    }
  }
  if (m >= 2 && is_odd_prime(n)) out.push_back(bound_periodic(m, n));
  return out;
}

}  // namespace billiards
