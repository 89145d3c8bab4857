#include "rational_lp.hpp"

#include <cstddef>

#include "kato/error.hpp"

namespace kato::detail {

std::optional<RationalVector> nonnegative_solution(const std::vector<RationalVector>& A,
                                                   const RationalVector& b) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A.front().size();
  if (b.size() != m) throw Error(ErrorKind::InvalidArgument, "simplex: rhs size mismatch");
  if (m == 0) return RationalVector(n, mpq_class(0));

  // Tableau columns: n structural, m artificial, then the rhs.
  const std::size_t width = n + m + 1;
  std::vector<RationalVector> tab(m, RationalVector(width, mpq_class(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw Error(ErrorKind::InvalidArgument, "simplex: ragged matrix");
    if (b[i] < 0) throw Error(ErrorKind::InvalidArgument, "simplex: negative rhs");
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = A[i][j];
    tab[i][n + i] = 1;
    tab[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  // Reduced costs of "minimise sum of artificials".
  RationalVector cost(width, mpq_class(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tab[i][j];
  for (std::size_t i = 0; i < m; ++i) cost[width - 1] -= tab[i][width - 1];

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;

    std::size_t leave = m;
    mpq_class best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      mpq_class ratio = tab[i][width - 1] / tab[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    // Phase one is bounded below by zero, so some row always qualifies.
    if (leave == m) throw Error(ErrorKind::InvalidArgument, "simplex: unbounded phase one");

    const mpq_class pivot = tab[leave][enter];
    for (auto& x : tab[leave]) x /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const mpq_class f = tab[i][enter];
      for (std::size_t j = 0; j < width; ++j) tab[i][j] -= f * tab[leave][j];
    }
    if (cost[enter] != 0) {
      const mpq_class f = cost[enter];
      for (std::size_t j = 0; j < width; ++j) cost[j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  if (cost[width - 1] != 0) return std::nullopt;
  RationalVector x(n, mpq_class(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab[i][width - 1];
  return x;
}

mpq_class dot(const RationalVector& u, const std::vector<mpz_class>& v) {
  mpq_class s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

std::optional<RationalVector> separating_functional(
    std::size_t dim, const std::vector<std::vector<mpz_class>>& vanish,
    const std::vector<std::vector<mpz_class>>& positive) {
  if (vanish.empty() && positive.empty()) return RationalVector(dim, mpq_class(0));
  // u = u_plus - u_minus; one surplus variable per strict row.
  const std::size_t cols = 2 * dim + positive.size();
  std::vector<RationalVector> A;
  RationalVector b;
  auto add_row = [&](const std::vector<mpz_class>& v, std::size_t surplus, mpq_class rhs) {
    RationalVector row(cols, mpq_class(0));
    for (std::size_t i = 0; i < dim; ++i) {
      row[i] = v[i];
      row[dim + i] = -v[i];
    }
    if (surplus < positive.size()) row[2 * dim + surplus] = -1;
    A.push_back(std::move(row));
    b.push_back(std::move(rhs));
  };
  for (const auto& v : vanish) add_row(v, positive.size(), 0);
  for (std::size_t j = 0; j < positive.size(); ++j) add_row(positive[j], j, 1);

  const auto x = nonnegative_solution(A, b);
  if (!x) return std::nullopt;
  RationalVector u(dim);
  for (std::size_t i = 0; i < dim; ++i) u[i] = (*x)[i] - (*x)[dim + i];
  return u;
}

std::vector<mpz_class> clear_denominators(const RationalVector& v) {
  mpz_class l = 1;
  for (const auto& x : v) l = lcm(l, mpz_class(x.get_den()));
  std::vector<mpz_class> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    mpq_class scaled = x * l;
    out.push_back(scaled.get_num());
  }
  return out;
}

}  // namespace kato::detail
