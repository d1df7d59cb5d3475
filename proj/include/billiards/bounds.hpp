#pragma once

#include <string>
#include <vector>

#include "billiards/ring.hpp"

namespace billiards {

enum class TrajectoryKind { ClosedFromPoint, Periodic };
enum class BoundClause { I, II, III, Periodic };

std::string clause_name(BoundClause c);
std::string kind_name(TrajectoryKind k);

struct BoundReport {
  int m = 0;
  int n = 0;
  TrajectoryKind kind = TrajectoryKind::ClosedFromPoint;
  BoundClause clause = BoundClause::I;
  long long value = 0;
  std::string witness;         // nonzero product (or counting fact) backing the value
  bool witness_verified = false;
};

// True when C(2i+2j, 2i) is even, i.e. when i and j share a binary digit.
bool binomial_parity_even(long long i, long long j);

// Lower bounds on the number of reversal orbits of closed trajectories from
// a fixed boundary point with n reflections.
//   I:   n                (m >= 3 odd)      floor(n/2)+1      (m >= 2 even)
//   II:  floor(log2 n)+m-1 (m odd), floor(log2 n)+m-2 (m even, n >= 4),
//        m (m even, n = 2); n even only
//   III: m*n/2 for generic data (n even); n/2 when m = 1
BoundReport bound_closed(int m, int n, BoundClause clause);

// Lower bound on the number of dihedral orbits of n-periodic trajectories;
// n must be an odd prime, m >= 2. Value n for odd m, (n+1)/2 for even m.
BoundReport bound_periodic(int m, int n);

// Every clause applicable to the cell (m, n), including the periodic bound
// when n is an odd prime.
std::vector<BoundReport> applicable_bounds(int m, int n);

bool is_odd_prime(int n);

}  // namespace billiards
