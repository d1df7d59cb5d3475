#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/configuration.hpp"

namespace billiards {

struct SolverSettings {
  int starts = 0;              // 0 -> 200 * n * m
  std::uint64_t seed = 12345;
  double eps = 0.0;            // 0 -> (1e-3 * diameter)^n
  double grad_tol = 1e-10;
  double null_threshold = 1e-6;  // relative spectral cut for nullity
  int max_iter = 150;
  int descent_iters = 10;      // initial iterations accept non-decreasing steps
  double trust_radius = 0.0;   // 0 -> 0.25 * diameter
  double merge_tol = 0.0;      // 0 -> 1e-6 * diameter
  double snap_grid = 0.0;      // 0 -> 1e-7 * diameter
  bool deflation = true;

  SolverSettings resolved(const ConvexBody& body, int n) const;
};

enum class GroupKind { Z2, Dn };

struct Certificate {
  double gradient_norm = 0.0;
  double min_gap = 0.0;
  std::vector<double> residual_history;
};

struct CriticalOrbit {
  Configuration representative;
  double length = 0.0;  // positive total length
  int morse_index = 0;
  int nullity = 0;
  GroupKind orbit_kind = GroupKind::Z2;
  int orbit_size = 1;
  bool degenerate = false;  // nullity > 0
  int family_points = 1;    // merged critical points at this level (families)
  Certificate certificate;
  std::vector<long long> canonical_form;  // snapped, lexicographically minimal
};

struct SolveReport {
  std::vector<CriticalOrbit> orbits;    // isolated (Morse) orbits
  std::vector<CriticalOrbit> families;  // degenerate levels, merged by value
  int starts_attempted = 0;
  int converged = 0;
  int rejected_boundary = 0;
  int rejected_duplicate = 0;
  int diverged = 0;
  SolverSettings settings;

  int isolated_count() const { return static_cast<int>(orbits.size()); }
  bool all_morse() const { return families.empty(); }
};

struct Classification {
  int morse_index = 0;
  int nullity = 0;
  bool is_generic = false;  // Morse at this configuration
};

// Index/nullity of the Hessian at a critical configuration. Eigenvalues in
// [-cut, cut] with cut = null_threshold * max |eigenvalue| count as zero.
// Throws NotCriticalError when the gradient norm exceeds grad_tol.
Classification classify(const Configuration& c, double grad_tol = 1e-8,
                        double null_threshold = 1e-6);

enum class BoundaryVerdict { Keep, Reject };

// Boundary screening on the eps-truncation: configurations in the boundary
// band whose gradient points toward smaller gap products are search
// artifacts, not trajectories.
BoundaryVerdict boundary_filter(const Configuration& c, double eps);

// Newton refinement of a single configuration to a critical point.
// Throws NoConvergenceError when the iteration fails.
Configuration refine_critical(const Configuration& start, const SolverSettings& settings);

// Group-orbit distance and canonical forms used for deduplication.
double group_distance(const Configuration& a, const Configuration& b, GroupKind group);
std::vector<long long> canonical_form(const Configuration& c, GroupKind group,
                                      double snap_grid);
int group_orbit_size(const Configuration& c, GroupKind group, double snap_grid);

// Merges group-equivalent orbits (canonical-form / distance duplicates).
std::vector<CriticalOrbit> deduplicate(std::vector<CriticalOrbit> orbits,
                                       GroupKind group, double merge_tol);

// Multi-start search over closed strings anchored at A (n >= 1 reflections).
SolveReport solve_closed(std::shared_ptr<const ConvexBody> body, const Vector& anchor,
                         int n, const SolverSettings& settings = {});

// Multi-start search over cyclic configurations (n >= 2).
SolveReport solve_periodic(std::shared_ptr<const ConvexBody> body, int n,
                           const SolverSettings& settings = {});

}  // namespace billiards
