#include "kato/abgrp.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "kato/error.hpp"

namespace kato {

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, mpz_class(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorKind::InvalidArgument, "ragged matrix literal");
    }
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) { return scalar(n, 1); }

IntMatrix IntMatrix::scalar(std::size_t n, const mpz_class& value) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<mpz_class>& entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows,
                                  const std::vector<std::vector<mpz_class>>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) {
      throw Error(ErrorKind::InvalidArgument, "column length does not match row count");
    }
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

std::vector<mpz_class> IntMatrix::column(std::size_t c) const {
  std::vector<mpz_class> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<mpz_class> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t count) const {
  IntMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const {
  IntMatrix out(count, cols_);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(first + r, c);
  return out;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_) {
    throw Error(ErrorKind::InvalidArgument, "hconcat: row counts differ");
  }
  IntMatrix out(rows_, cols_ + rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, cols_ + c) = rhs(r, c);
  }
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r != c && (*this)(r, c) != 0) return false;
  return true;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
  if (v.size() != cols_) {
    throw Error(ErrorKind::InvalidArgument, "apply: vector length mismatch");
  }
  std::vector<mpz_class> out(rows_, mpz_class(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw Error(ErrorKind::InvalidArgument, "matrix product: inner dimensions differ");
  }
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const mpz_class& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ", ";
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ", ";
      os << (*this)(r, c);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

mpz_class determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  }
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  mpz_class sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Elementary operations applied to D while keeping U*m*V == D and the
// inverses in sync.
struct SmithWork {
  IntMatrix D, U, V, Ui, Vi;

  void add_row(std::size_t dst, std::size_t src, const mpz_class& c) {
    if (c == 0) return;
    for (std::size_t j = 0; j < D.cols(); ++j) D(dst, j) += c * D(src, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(dst, j) += c * U(src, j);
    for (std::size_t i = 0; i < Ui.rows(); ++i) Ui(i, src) -= c * Ui(i, dst);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < D.cols(); ++j) std::swap(D(a, j), D(b, j));
    for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U(a, j), U(b, j));
    for (std::size_t i = 0; i < Ui.rows(); ++i) std::swap(Ui(i, a), Ui(i, b));
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < D.cols(); ++j) D(r, j) = -D(r, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(r, j) = -U(r, j);
    for (std::size_t i = 0; i < Ui.rows(); ++i) Ui(i, r) = -Ui(i, r);
  }
  void add_col(std::size_t dst, std::size_t src, const mpz_class& c) {
    if (c == 0) return;
    for (std::size_t i = 0; i < D.rows(); ++i) D(i, dst) += c * D(i, src);
    for (std::size_t i = 0; i < V.rows(); ++i) V(i, dst) += c * V(i, src);
    for (std::size_t j = 0; j < Vi.cols(); ++j) Vi(src, j) -= c * Vi(dst, j);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < D.rows(); ++i) std::swap(D(i, a), D(i, b));
    for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V(i, a), V(i, b));
    for (std::size_t j = 0; j < Vi.cols(); ++j) std::swap(Vi(a, j), Vi(b, j));
  }
};

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithWork w{m, IntMatrix::identity(rows), IntMatrix::identity(cols),
              IntMatrix::identity(rows), IntMatrix::identity(cols)};
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (w.D(i, j) == 0) continue;
        if (pr == rows || abs(w.D(i, j)) < abs(w.D(pr, pc))) {
          pr = i;
          pc = j;
        }
      }
    if (pr == rows) break;
    w.swap_rows(t, pr);
    w.swap_cols(t, pc);

    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (w.D(i, t) == 0) continue;
        w.add_row(i, t, -floor_div(w.D(i, t), w.D(t, t)));
        if (w.D(i, t) != 0) {
          w.swap_rows(i, t);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (w.D(t, j) == 0) continue;
        w.add_col(j, t, -floor_div(w.D(t, j), w.D(t, t)));
        if (w.D(t, j) != 0) {
          w.swap_cols(j, t);
          changed = true;
        }
      }
      if (changed) continue;
      // Row and column are clear; enforce divisibility into the remaining block.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w.D(i, j) % w.D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      w.add_row(t, bad, 1);
    }
    if (w.D(t, t) < 0) w.negate_row(t);
  }

  SmithForm out;
  out.rank = t;
  out.U = std::move(w.U);
  out.D = std::move(w.D);
  out.V = std::move(w.V);
  out.U_inverse = std::move(w.Ui);
  out.V_inverse = std::move(w.Vi);
  return out;
}

std::vector<mpz_class> SmithForm::invariant_factors() const {
  std::vector<mpz_class> out;
  out.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
  return out;
}

std::size_t matrix_rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

IntMatrix integer_kernel(const IntMatrix& m) {
  const SmithForm snf = smith_normal_form(m);
  return snf.V.column_block(snf.rank, m.cols() - snf.rank);
}

// ---------------------------------------------------------------------------
// FgAbelianGroup

FgAbelianGroup FgAbelianGroup::from_cyclic_orders(const std::vector<mpz_class>& orders) {
  std::vector<mpz_class> abs_orders;
  abs_orders.reserve(orders.size());
  for (const auto& o : orders) abs_orders.push_back(abs(o));
  return cokernel(IntMatrix::diagonal(abs_orders));
}

FgAbelianGroup FgAbelianGroup::free(std::size_t rank) { return {rank, {}}; }

std::optional<mpz_class> FgAbelianGroup::order() const {
  if (free_rank_ != 0) return std::nullopt;
  mpz_class n = 1;
  for (const auto& d : torsion_) n *= d;
  return n;
}

mpz_class FgAbelianGroup::exponent() const {
  if (free_rank_ != 0) return 0;
  return torsion_.empty() ? mpz_class(1) : torsion_.back();
}

FgAbelianGroup FgAbelianGroup::operator+(const FgAbelianGroup& rhs) const {
  std::vector<mpz_class> orders(free_rank_ + rhs.free_rank_, mpz_class(0));
  orders.insert(orders.end(), torsion_.begin(), torsion_.end());
  orders.insert(orders.end(), rhs.torsion_.begin(), rhs.torsion_.end());
  return from_cyclic_orders(orders);
}

std::string FgAbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << 'Z';
    if (free_rank_ > 1) os << '^' << free_rank_;
    first = false;
  }
  for (const auto& d : torsion_) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

FgAbelianGroup cokernel(const IntMatrix& m) {
  const SmithForm snf = smith_normal_form(m);
  std::vector<mpz_class> torsion;
  for (const auto& d : snf.invariant_factors())
    if (d > 1) torsion.push_back(d);
  return FgAbelianGroup(m.rows() - snf.rank, std::move(torsion));
}

FgAbelianGroup tensor_mod(const FgAbelianGroup& g, const mpz_class& m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "tensor_mod needs m >= 1");
  std::vector<mpz_class> orders(g.free_rank(), m);
  for (const auto& d : g.torsion()) orders.push_back(gcd(d, m));
  return FgAbelianGroup::from_cyclic_orders(orders);
}

bool is_isomorphic(const FgAbelianGroup& a, const FgAbelianGroup& b) { return a == b; }

// ---------------------------------------------------------------------------
// CyclicSum / GroupMap

FgAbelianGroup CyclicSum::normal_form() const {
  return FgAbelianGroup::from_cyclic_orders(orders);
}

std::vector<mpz_class> CyclicSum::reduce(std::vector<mpz_class> v) const {
  for (std::size_t i = 0; i < v.size() && i < orders.size(); ++i) {
    if (orders[i] != 0) mpz_fdiv_r(v[i].get_mpz_t(), v[i].get_mpz_t(), orders[i].get_mpz_t());
  }
  return v;
}

CyclicSum CyclicSum::operator+(const CyclicSum& rhs) const {
  CyclicSum out = *this;
  out.orders.insert(out.orders.end(), rhs.orders.begin(), rhs.orders.end());
  return out;
}

CyclicSum CyclicSum::free(std::size_t rank) { return {std::vector<mpz_class>(rank, 0)}; }

CyclicSum CyclicSum::uniform(std::size_t count, const mpz_class& order) {
  return {std::vector<mpz_class>(count, order)};
}

namespace {

bool divisible(const mpz_class& value, const mpz_class& order) {
  return order == 0 ? value == 0 : value % order == 0;
}

// span(super) / span(sub) for lattices in Z^n with span(sub) ⊆ span(super).
FgAbelianGroup lattice_quotient(const IntMatrix& super, const IntMatrix& sub) {
  const SmithForm snf = smith_normal_form(super);
  const IntMatrix coords = snf.U * sub;
  IntMatrix reduced(snf.rank, sub.cols());
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    for (std::size_t j = 0; j < coords.cols(); ++j) {
      if (i >= snf.rank) {
        if (coords(i, j) != 0) {
          throw Error(ErrorKind::InvalidArgument, "lattice_quotient: sub is not contained in super");
        }
        continue;
      }
      if (coords(i, j) % snf.D(i, i) != 0) {
        throw Error(ErrorKind::InvalidArgument, "lattice_quotient: sub is not contained in super");
      }
      reduced(i, j) = coords(i, j) / snf.D(i, i);
    }
  }
  return cokernel(reduced);
}

}  // namespace

bool GroupMap::is_well_defined() const {
  if (matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count()) {
    return false;
  }
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    const mpz_class& oj = source.orders[j];
    if (oj == 0) continue;
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      if (!divisible(oj * matrix(i, j), target.orders[i])) return false;
  }
  return true;
}

bool GroupMap::is_surjective() const {
  return cokernel(matrix.hconcat(target.relation_matrix())).is_trivial();
}

FgAbelianGroup GroupMap::kernel() const {
  const std::size_t s = source.generator_count();
  const std::size_t t = target.generator_count();
  IntMatrix neg_rel(t, t);
  for (std::size_t i = 0; i < t; ++i) neg_rel(i, i) = -target.orders[i];
  // x with matrix*x in the target relation lattice = first s coordinates of
  // the integer kernel of [matrix | -relations].
  const IntMatrix k = integer_kernel(matrix.hconcat(neg_rel));
  const IntMatrix preimage = k.row_block(0, s);
  const IntMatrix rel = source.relation_matrix();
  return lattice_quotient(preimage.hconcat(rel), rel);
}

FgAbelianGroup GroupMap::image() const {
  const IntMatrix rel = target.relation_matrix();
  return lattice_quotient(matrix.hconcat(rel), rel);
}

bool GroupMap::is_injective() const { return kernel().is_trivial(); }

GroupMap GroupMap::compose(const GroupMap& inner) const {
  if (inner.target.orders.size() != source.orders.size()) {
    throw Error(ErrorKind::InvalidArgument, "compose: intermediate groups differ");
  }
  for (std::size_t i = 0; i < source.orders.size(); ++i)
    if (inner.target.orders[i] != source.orders[i]) {
      throw Error(ErrorKind::InvalidArgument, "compose: intermediate groups differ");
    }
  return {inner.source, target, matrix * inner.matrix};
}

bool GroupMap::same_map(const GroupMap& other) const {
  if (source.orders != other.source.orders || target.orders != other.target.orders) return false;
  if (matrix.rows() != other.matrix.rows() || matrix.cols() != other.matrix.cols()) return false;
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      if (!divisible(matrix(i, j) - other.matrix(i, j), target.orders[i])) return false;
  return true;
}

}  // namespace kato
