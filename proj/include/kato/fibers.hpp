#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kato/abgrp.hpp"
#include "kato/monoid.hpp"
#include "kato/profin.hpp"
#include "kato/semialg.hpp"

namespace kato {

/// Fiber of C(P)_log -> C(P) over a stratum: a real torus (S^1)^r.
struct KnFiberModel {
  Face stratum_face;
  std::size_t torus_rank = 0;
  FgAbelianGroup pi1;
};

/// Fiber of the root-stack tower over a stratum: n -> B(mu_n of the stalk).
struct RootFiberTower {
  Face stratum_face;
  std::size_t rank = 0;
  FiniteAbelianProSystem tower;
};

KnFiberModel kn_fiber(const AffineMonoid& m, const Face& f);
RootFiberTower root_fiber_tower(const AffineMonoid& m, const Face& f);

/// pi1 of the torus Z^r -> level n of the root tower, reduction mod n.
GroupMap comparison_on_pi1(const AffineMonoid& m, const Face& f, Level n);

struct FiberLevelRecord {
  Level n = 0;
  FgAbelianGroup kn_side;
  FgAbelianGroup root_side;
  /// Matrix of the map induced by the comparison on level-n groups.
  IntMatrix induced_map;
};

struct FiberEquivalenceCertificate {
  bool equivalent = true;
  std::size_t rank = 0;
  Level bound = 0;
  EquivalenceCertificate pro;
  std::vector<FiberLevelRecord> levels;
  std::string failure;
};

/// Compares the profinite completion of the torus fiber with the classifying
/// pro-space of the root tower over the same stratum, level by level up to
/// `bound`, and checks that the comparison maps are isomorphisms commuting
/// with the transitions.
FiberEquivalenceCertificate verify_fiber_equivalence(const AffineMonoid& m, const Face& f,
                                                     Level bound);

/// Fiber of C((1/n)P)_log -> C(P)_log over p, in lexicographic order of the
/// chosen root indices. Throws InvalidPoint, ToleranceBreach, or
/// FiberCardinalityMismatch when the count differs from n^rank.
std::vector<KnPoint> kn_kummer_fiber(const AffineMonoid& m, const KnPoint& p, Level n,
                                     double tol = kDefaultTolerance);

/// Fiber of C((1/n)P) -> C(P) over p. Roots of unity are not Gaussian
/// rationals, so the result is always floating.
std::vector<CxPoint> algebraic_kummer_fiber(const AffineMonoid& m, const CxPoint& p, Level n,
                                            double tol = kDefaultTolerance);

struct TorsorReport {
  bool is_torsor = false;
  bool preserves_fiber = false;
  bool free = false;
  bool transitive = false;
  std::uint64_t group_order = 0;
  std::size_t fiber_size = 0;
  /// Group elements as vectors in (Z/n)^r, in lexicographic order.
  std::vector<std::vector<std::uint64_t>> group_elements;
  /// orbit_table[g][x] = index of g . x in the fiber (fiber_size if it left the fiber).
  std::vector<std::vector<std::size_t>> orbit_table;
  /// Largest residual of a fiber point against the equations of (1/n)P.
  double max_residual = 0.0;
  std::string failure;
};

/// Lets mu_n(P) act on the Kummer fiber over p through the angles and
/// checks that the action preserves the fiber and is free and transitive.
TorsorReport torsor_check(const AffineMonoid& m, const KnPoint& p, Level n,
                          double tol = kDefaultTolerance);

}  // namespace kato
