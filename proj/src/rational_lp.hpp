#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace kato::detail {

using RationalVector = std::vector<mpq_class>;

/// Phase-one simplex over Q with Bland's rule: returns some x >= 0 with
/// A x == b, or nullopt when the system is infeasible. Requires b >= 0.
std::optional<RationalVector> nonnegative_solution(const std::vector<RationalVector>& A,
                                                   const RationalVector& b);

/// Searches for u in Q^d with <u, v> == 0 for every v in `vanish` and
/// <u, v> >= 1 for every v in `positive`. Exact; nullopt when none exists.
std::optional<RationalVector> separating_functional(
    std::size_t dim, const std::vector<std::vector<mpz_class>>& vanish,
    const std::vector<std::vector<mpz_class>>& positive);

/// Smallest positive integer multiple of a rational vector.
std::vector<mpz_class> clear_denominators(const RationalVector& v);

mpq_class dot(const RationalVector& u, const std::vector<mpz_class>& v);

}  // namespace kato::detail
