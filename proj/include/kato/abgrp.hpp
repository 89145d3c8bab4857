#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace kato {

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
///
/// Presentations follow one convention throughout the library: a matrix
/// with `rows` generators and `cols` relators maps Z^cols -> Z^rows, and the
/// presented group is Z^rows / image.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix scalar(std::size_t n, const mpz_class& value);
  static IntMatrix diagonal(const std::vector<mpz_class>& entries);
  /// Builds a matrix whose columns are the given vectors, each of length `rows`.
  static IntMatrix from_columns(std::size_t rows,
                                const std::vector<std::vector<mpz_class>>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<mpz_class> column(std::size_t c) const;
  std::vector<mpz_class> row(std::size_t r) const;
  IntMatrix transpose() const;
  /// Columns [first, first + count).
  IntMatrix column_block(std::size_t first, std::size_t count) const;
  /// Rows [first, first + count).
  IntMatrix row_block(std::size_t first, std::size_t count) const;
  /// Horizontal concatenation [*this | rhs]; row counts must match.
  IntMatrix hconcat(const IntMatrix& rhs) const;

  bool is_diagonal() const;
  std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

/// Exact determinant of a square matrix (fraction-free Bareiss elimination).
mpz_class determinant(const IntMatrix& m);

/// Result of Smith normal form: U * m * V == D.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
  IntMatrix U_inverse;
  IntMatrix V_inverse;
  std::size_t rank = 0;

  /// Nonzero diagonal entries of D in chain order d1 | d2 | ...
  std::vector<mpz_class> invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

std::size_t matrix_rank(const IntMatrix& m);

/// Basis of the integer kernel {x in Z^cols : m x = 0}, one column per basis vector.
IntMatrix integer_kernel(const IntMatrix& m);

/// Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dt in
/// invariant-factor normal form (d1 | d2 | ... | dt, every di >= 2).
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;
  /// Accepts any list of cyclic orders; entries equal to 0 count as Z, units
  /// are dropped, and the rest is brought into divisibility-chain form.
  static FgAbelianGroup from_cyclic_orders(const std::vector<mpz_class>& orders);
  static FgAbelianGroup free(std::size_t rank);
  static FgAbelianGroup trivial() { return {}; }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<mpz_class>& torsion() const { return torsion_; }
  bool is_finite() const { return free_rank_ == 0; }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  /// Group order; nullopt for infinite groups.
  std::optional<mpz_class> order() const;
  mpz_class exponent() const;

  /// Direct sum.
  FgAbelianGroup operator+(const FgAbelianGroup& rhs) const;
  friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;

  /// e.g. "Z^2 + Z/2 + Z/4", or "0" for the trivial group.
  std::string to_string() const;

 private:
  friend FgAbelianGroup cokernel(const IntMatrix& m);
  FgAbelianGroup(std::size_t free_rank, std::vector<mpz_class> torsion)
      : free_rank_(free_rank), torsion_(std::move(torsion)) {}

  std::size_t free_rank_ = 0;
  std::vector<mpz_class> torsion_;
};

/// Z^rows / image(m).
FgAbelianGroup cokernel(const IntMatrix& m);

/// G / mG.
FgAbelianGroup tensor_mod(const FgAbelianGroup& g, const mpz_class& m);

bool is_isomorphic(const FgAbelianGroup& a, const FgAbelianGroup& b);

/// A group presented as a direct sum of cyclic groups Z/o_i on named
/// generators e_i (o_i == 0 means Z). Unlike FgAbelianGroup this keeps the
/// generators, so homomorphisms between such groups can be written as
/// integer matrices.
struct CyclicSum {
  std::vector<mpz_class> orders;

  std::size_t generator_count() const { return orders.size(); }
  FgAbelianGroup normal_form() const;
  IntMatrix relation_matrix() const { return IntMatrix::diagonal(orders); }
  /// Reduces each coordinate into [0, o_i) where o_i > 0.
  std::vector<mpz_class> reduce(std::vector<mpz_class> v) const;
  /// Direct sum of presentations.
  CyclicSum operator+(const CyclicSum& rhs) const;

  static CyclicSum free(std::size_t rank);
  static CyclicSum uniform(std::size_t count, const mpz_class& order);
};

/// Homomorphism source -> target, e_j mapped to column j of `matrix`.
struct GroupMap {
  CyclicSum source;
  CyclicSum target;
  IntMatrix matrix;

  /// Every relation of the source maps into the target's relation lattice.
  bool is_well_defined() const;
  bool is_surjective() const;
  bool is_injective() const;
  bool is_isomorphism() const { return is_surjective() && is_injective(); }
  FgAbelianGroup kernel() const;
  FgAbelianGroup image() const;
  /// this ∘ inner; requires inner.target to have the same orders as source.
  GroupMap compose(const GroupMap& inner) const;
  /// Same source and target and columns congruent modulo the target relations.
  bool same_map(const GroupMap& other) const;
};

}  // namespace kato
