#include "kato/profin.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kato/error.hpp"

namespace kato {

namespace {

mpz_class as_mpz(Level n) { return mpz_class(static_cast<unsigned long>(n)); }

void require_level(Level n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "pro-system levels start at 1");
}

const char* const kScope =
    "level-wise invariant factors and transition kernels over the tested "
    "indices; this is not a categorical pro-isomorphism";

}  // namespace

FiniteAbelianProSystem::FiniteAbelianProSystem(std::string description, LevelFn level,
                                               TransitionFn transition)
    : description_(std::move(description)),
      level_(std::move(level)),
      transition_(std::move(transition)) {}

CyclicSum FiniteAbelianProSystem::presentation(Level n) const {
  require_level(n);
  CyclicSum p = level_(n);
  if (std::any_of(p.orders.begin(), p.orders.end(), [](const mpz_class& o) { return o == 0; })) {
    throw Error(ErrorKind::InvalidArgument,
                description_ + ": level " + std::to_string(n) + " is not finite");
  }
  return p;
}

GroupMap FiniteAbelianProSystem::transition(Level from, Level to) const {
  require_level(from);
  require_level(to);
  if (from % to != 0) {
    throw Error(ErrorKind::InvalidArgument, "no transition " + std::to_string(from) + " -> " +
                                                std::to_string(to) + ": levels not divisible");
  }
  return GroupMap{presentation(from), presentation(to), transition_(from, to)};
}

FiniteAbelianProSystem completion(const FgAbelianGroup& g) {
  const std::size_t gens = g.free_rank() + g.torsion().size();
  return FiniteAbelianProSystem(
      "completion of " + g.to_string(),
      [g](Level n) {
        CyclicSum p = CyclicSum::uniform(g.free_rank(), as_mpz(n));
        for (const auto& d : g.torsion()) p.orders.push_back(gcd(d, as_mpz(n)));
        return p;
      },
      [gens](Level, Level) { return IntMatrix::identity(gens); });
}

FiniteAbelianProSystem product(const std::vector<FiniteAbelianProSystem>& factors) {
  std::string description = "product of [";
  for (std::size_t i = 0; i < factors.size(); ++i)
    description += (i ? "; " : "") + factors[i].description();
  description += "]";
  return FiniteAbelianProSystem(
      std::move(description),
      [factors](Level n) {
        CyclicSum p;
        for (const auto& f : factors) p = p + f.presentation(n);
        return p;
      },
      [factors](Level from, Level to) {
        std::vector<IntMatrix> blocks;
        std::size_t rows = 0, cols = 0;
        for (const auto& f : factors) {
          blocks.push_back(f.transition(from, to).matrix);
          rows += blocks.back().rows();
          cols += blocks.back().cols();
        }
        IntMatrix out(rows, cols);
        std::size_t r0 = 0, c0 = 0;
        for (const auto& b : blocks) {
          for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
          r0 += b.rows();
          c0 += b.cols();
        }
        return out;
      });
}

FiniteAbelianProSystem mu_tower(const AffineMonoid& m) {
  const std::size_t r = m.gp_lattice_rank();
  return FiniteAbelianProSystem(
      "mu-tower of a rank-" + std::to_string(r) + " monoid",
      [m](Level n) {
        // C_n = coker of the Kummer inclusion, which is diagonal.
        const IntMatrix inclusion = kummer(m, n).inclusion_matrix;
        CyclicSum p;
        for (std::size_t i = 0; i < inclusion.rows(); ++i) p.orders.push_back(inclusion(i, i));
        return p;
      },
      [r](Level, Level) { return IntMatrix::identity(r); });
}

CoherenceReport check_coherence(const FiniteAbelianProSystem& s, Level bound) {
  std::map<Level, CyclicSum> levels;
  for (Level n = 1; n <= bound; ++n) levels.emplace(n, s.presentation(n));
  auto fail = [](std::string msg) { return CoherenceReport{false, std::move(msg)}; };
  for (Level m = 1; m <= bound; ++m) {
    for (Level n = 1; n <= m; ++n) {
      if (m % n != 0) continue;
      const GroupMap t = s.transition(m, n);
      if (!t.is_well_defined())
        return fail("transition " + std::to_string(m) + "->" + std::to_string(n) + " is not well defined");
      if (!t.is_surjective())
        return fail("transition " + std::to_string(m) + "->" + std::to_string(n) + " is not onto");
      if (!is_isomorphic(tensor_mod(levels.at(m).normal_form(), as_mpz(n)),
                         levels.at(n).normal_form()))
        return fail("level " + std::to_string(n) + " differs from level " + std::to_string(m) +
                    " reduced mod " + std::to_string(n));
      if (n == m && !t.same_map(GroupMap{t.source, t.target, IntMatrix::identity(t.source.generator_count())}))
        return fail("transition " + std::to_string(m) + "->" + std::to_string(m) + " is not the identity");
    }
  }
  for (Level k = 1; k <= bound; ++k)
    for (Level m = 1; m <= k; ++m) {
      if (k % m != 0) continue;
      const GroupMap outer_first = s.transition(k, m);
      for (Level n = 1; n <= m; ++n) {
        if (m % n != 0) continue;
        const GroupMap composed = s.transition(m, n).compose(outer_first);
        if (!composed.same_map(s.transition(k, n)))
          return fail("transitions " + std::to_string(k) + "->" + std::to_string(m) + "->" +
                      std::to_string(n) + " do not compose to " + std::to_string(k) + "->" +
                      std::to_string(n));
      }
    }
  return {};
}

EquivalenceCertificate equivalent_on(const FiniteAbelianProSystem& a,
                                     const FiniteAbelianProSystem& b,
                                     const std::vector<Level>& indices) {
  EquivalenceCertificate cert;
  cert.scope = kScope;
  std::vector<Level> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  for (Level n : sorted) {
    LevelRecord rec{n, a.level(n), b.level(n)};
    const bool same = is_isomorphic(rec.a, rec.b);
    cert.levels.push_back(std::move(rec));
    if (!same && cert.equivalent) {
      cert.equivalent = false;
      cert.witness_level = n;
      cert.reason = "level " + std::to_string(n) + ": " + cert.levels.back().a.to_string() +
                    " vs " + cert.levels.back().b.to_string();
    }
  }
  if (!cert.equivalent) return cert;

  for (Level m : sorted)
    for (Level n : sorted) {
      if (n >= m || m % n != 0) continue;
      const GroupMap ta = a.transition(m, n);
      const GroupMap tb = b.transition(m, n);
      std::string problem;
      if (!ta.is_surjective() || !tb.is_surjective()) {
        problem = "transition is not onto";
      } else if (!is_isomorphic(ta.kernel(), tb.kernel())) {
        problem = "transition kernels differ: " + ta.kernel().to_string() + " vs " +
                  tb.kernel().to_string();
      }
      if (!problem.empty()) {
        cert.equivalent = false;
        cert.witness_transition = std::make_pair(m, n);
        cert.reason = std::to_string(m) + "->" + std::to_string(n) + ": " + problem;
        return cert;
      }
    }
  return cert;
}

EquivalenceCertificate equivalent_up_to(const FiniteAbelianProSystem& a,
                                        const FiniteAbelianProSystem& b, Level bound) {
  if (bound == 0) throw Error(ErrorKind::InvalidArgument, "bound must be >= 1");
  std::vector<Level> indices(bound);
  for (Level n = 1; n <= bound; ++n) indices[n - 1] = n;
  return equivalent_on(a, b, indices);
}

ClassifyingProSpace classifying_pro_space(const FiniteAbelianProSystem& s) {
  return ClassifyingProSpace(s);
}

ClassifyingProSpace profinite_type(const K1HomotopyType& t) {
  return classifying_pro_space(completion(t.pi1));
}

EquivalenceCertificate equivalent_up_to(const ClassifyingProSpace& a,
                                        const ClassifyingProSpace& b, Level bound) {
  return equivalent_up_to(a.fundamental_groups(), b.fundamental_groups(), bound);
}

}  // namespace kato
