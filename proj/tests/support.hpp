#pragma once

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kato/abgrp.hpp"
#include "kato/cli.hpp"
#include "kato/error.hpp"
#include "kato/monoid.hpp"

namespace kato::test {

inline std::string corpus(const std::string& file) { return std::string(KATO_CORPUS_DIR) + "/" + file; }

inline AffineMonoid corpus_monoid(const std::string& file) {
  return validate(cli::load_chart(corpus(file)).spec);
}

inline const std::vector<std::string>& corpus_files() {
  static const std::vector<std::string> files{"log_point.json", "a1_chart.json", "n2.json",
                                              "a1_cone.json"};
  return files;
}

inline MonoidSpec spec_of(std::size_t d, std::vector<std::vector<long>> gens,
                          std::optional<std::vector<Relation>> rels = std::nullopt) {
  MonoidSpec s;
  s.ambient_rank = d;
  for (const auto& g : gens) {
    IntVector v;
    for (long x : g) v.emplace_back(x);
    s.generators.push_back(v);
  }
  s.relations = std::move(rels);
  return s;
}

template <class F>
void expect_kind(F&& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind) << ", nothing thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t max_dim, long lo, long hi) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<long> entry(lo, hi);
  IntMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
  return m;
}

// Oracles below deliberately avoid the library's Smith form and LP code.

/// Lower-triangular Hermite basis (as rows) of the lattice spanned by the
/// columns of m, or nullopt if that lattice is not of full rank.
inline std::optional<std::vector<std::vector<mpz_class>>> hermite_rows(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<mpz_class>> pool;
  for (std::size_t c = 0; c < m.cols(); ++c) pool.push_back(m.column(c));
  std::vector<std::vector<mpz_class>> basis(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Gcd-combine all pool vectors on coordinate i; the survivor is the pivot.
    for (;;) {
      std::size_t best = pool.size();
      for (std::size_t v = 0; v < pool.size(); ++v)
        if (pool[v][i] != 0 && (best == pool.size() || abs(pool[v][i]) < abs(pool[best][i]))) best = v;
      if (best == pool.size()) break;
      bool reduced = false;
      for (std::size_t v = 0; v < pool.size(); ++v) {
        if (v == best || pool[v][i] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), pool[v][i].get_mpz_t(), pool[best][i].get_mpz_t());
        for (std::size_t r = 0; r < n; ++r) pool[v][r] -= q * pool[best][r];
        reduced = true;
      }
      if (!reduced) {
        basis[i] = pool[best];
        if (basis[i][i] < 0)
          for (auto& x : basis[i]) x = -x;
        pool.erase(pool.begin() + static_cast<long>(best));
        break;
      }
    }
    if (basis[i].empty()) return std::nullopt;
  }
  return basis;
}

/// |Z^rows / image(m)| by breadth-first search over canonical coset
/// representatives reduced against the Hermite basis; nullopt if infinite.
inline std::optional<std::uint64_t> coset_count(const IntMatrix& m) {
  const std::size_t n = m.rows();
  const auto basis = hermite_rows(m);
  if (!basis) return std::nullopt;
  auto reduce = [&](std::vector<mpz_class> v) {
    for (std::size_t i = 0; i < n; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), (*basis)[i][i].get_mpz_t());
      for (std::size_t r = 0; r < n; ++r) v[r] -= q * (*basis)[i][r];
    }
    return v;
  };
  std::set<std::vector<mpz_class>> seen{reduce(std::vector<mpz_class>(n, 0))};
  std::vector<std::vector<mpz_class>> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::vector<mpz_class>> next;
    for (const auto& v : frontier)
      for (std::size_t i = 0; i < n; ++i) {
        auto w = v;
        w[i] += 1;
        w = reduce(std::move(w));
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return seen.size();
}

inline mpz_class laplace_det(const std::vector<std::vector<mpz_class>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    det += (c % 2 ? -1 : 1) * a[0][c] * laplace_det(minor);
  }
  return det;
}

/// gcd of all rows x rows minors; equals the cokernel order when finite.
inline mpz_class maximal_minor_gcd(const IntMatrix& m) {
  const std::size_t n = m.rows();
  mpz_class g = 0;
  if (n > m.cols()) return 0;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == n) {
      std::vector<std::vector<mpz_class>> sq(n, std::vector<mpz_class>(n));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) sq[r][c] = m(r, pick[c]);
      g = gcd(g, laplace_det(sq));
      return;
    }
    for (std::size_t c = start; c < m.cols(); ++c) {
      pick[depth] = c;
      rec(depth + 1, c + 1);
    }
  };
  rec(0, 0);
  return g;
}

/// Words of total degree <= bound over `k` letters.
inline std::vector<std::vector<long>> words(std::size_t k, long bound) {
  std::vector<std::vector<long>> out;
  std::vector<long> w(k, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i == k) {
      out.push_back(w);
      return;
    }
    for (long e = 0; e <= left; ++e) {
      w[i] = e;
      rec(i + 1, left - e);
    }
    w[i] = 0;
  };
  rec(0, bound);
  return out;
}

/// Faces by the combinatorial axiom: S is a face iff no word touching a
/// generator outside S has the same value as a word over S. Checked for
/// words of degree <= bound; supports returned sorted by (size, lex).
inline std::vector<std::vector<std::size_t>> subset_face_oracle(const MonoidSpec& s, long bound) {
  const std::size_t k = s.generators.size();
  std::map<std::vector<mpz_class>, std::vector<unsigned>> supports_by_value;
  for (const auto& w : words(k, bound)) {
    std::vector<mpz_class> v(s.ambient_rank, 0);
    unsigned mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (w[j] == 0) continue;
      mask |= 1u << j;
      for (std::size_t i = 0; i < s.ambient_rank; ++i) v[i] += w[j] * s.generators[j][i];
    }
    supports_by_value[v].push_back(mask);
  }
  std::vector<std::vector<std::size_t>> out;
  for (unsigned face = 0; face < (1u << k); ++face) {
    bool ok = true;
    for (const auto& [value, masks] : supports_by_value) {
      const bool reached_from_face =
          std::any_of(masks.begin(), masks.end(), [&](unsigned m) { return (m & ~face) == 0; });
      if (reached_from_face &&
          std::any_of(masks.begin(), masks.end(), [&](unsigned m) { return (m & ~face) != 0; })) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < k; ++j)
      if (face & (1u << j)) support.push_back(j);
    out.push_back(support);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace kato::test
