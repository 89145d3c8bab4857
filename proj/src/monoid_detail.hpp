#pragma once

#include <map>
#include <vector>

#include "kato/monoid.hpp"

namespace kato::detail {

// Memoized test of x in N<generators>; the grading must be strictly
// positive on every generator so the search terminates.
class MembershipOracle {
 public:
  MembershipOracle(std::vector<IntVector> generators, IntVector grading);
  bool contains(const IntVector& x);

 private:
  std::vector<IntVector> generators_;
  IntVector grading_;
  std::vector<mpz_class> weights_;
  std::map<IntVector, bool> memo_;
};

}  // namespace kato::detail
