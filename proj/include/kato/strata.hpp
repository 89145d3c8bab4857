#pragma once

#include <cstddef>
#include <vector>

#include "kato/monoid.hpp"
#include "kato/semialg.hpp"

namespace kato {

struct StratumEntry {
  Face face;
  std::size_t stalk_rank = 0;
  AffineMonoid stalk;
};

/// Rank stratification of Spec C[P]: one entry per face, in face order.
struct StratumTable {
  AffineMonoid monoid;
  std::vector<StratumEntry> entries;
  std::size_t max_rank = 0;

  /// Entries of R_n, the locus where the stalk rank is at least n.
  std::vector<const StratumEntry*> at_least(std::size_t n) const;
  /// The entry of maximal rank (the vertex when max_rank >= 1).
  const StratumEntry& vertex() const;
  const StratumEntry& entry(const Face& f) const;
};

StratumTable stratify(const AffineMonoid& m);

/// Face whose generators are exactly the coordinates that do not vanish at
/// p (|z| > tol for floating points, z != 0 for exact ones). Throws
/// NotOnVariety if p violates the equations beyond tol and NotAFace if the
/// vanishing pattern is not a face.
Face stratum_of_point(const AffineMonoid& m, const CxPoint& p, double tol = kDefaultTolerance);

}  // namespace kato
