#include "kato/monoid.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kato/error.hpp"
#include "monoid_detail.hpp"
#include "rational_lp.hpp"

namespace kato {

namespace {

std::string vector_to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

IntVector combine(const IntMatrix& gens, const std::vector<std::int64_t>& coeffs) {
  IntVector out(gens.rows(), mpz_class(0));
  for (std::size_t j = 0; j < gens.cols(); ++j) {
    if (coeffs[j] == 0) continue;
    const mpz_class c(static_cast<long>(coeffs[j]));
    for (std::size_t i = 0; i < gens.rows(); ++i) out[i] += c * gens(i, j);
  }
  return out;
}

mpz_class pairing(const IntVector& u, const IntVector& v) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

std::int64_t to_exponent(const mpz_class& v) {
  if (!v.fits_slong_p()) {
    throw Error(ErrorKind::InvalidArgument, "relation exponent exceeds 64-bit range");
  }
  return v.get_si();
}

std::vector<Relation> relations_from_kernel(const IntMatrix& gens) {
  const IntMatrix kernel = integer_kernel(gens);
  std::vector<Relation> out;
  for (std::size_t c = 0; c < kernel.cols(); ++c) {
    IntVector v = kernel.column(c);
    auto first = std::find_if(v.begin(), v.end(), [](const mpz_class& x) { return x != 0; });
    if (first != v.end() && *first < 0)
      for (auto& x : v) x = -x;
    Relation r;
    for (const auto& x : v) {
      r.lhs.push_back(x > 0 ? to_exponent(x) : 0);
      r.rhs.push_back(x < 0 ? to_exponent(-x) : 0);
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Every generator word must be linked to every other word with the same
// value by relation moves a + lhs <-> a + rhs. Checked for all values of
// grading weight <= bound * (smallest generator weight); every word of such
// a value has degree <= bound, so its fiber is collected in full.
void verify_relation_completeness(const IntMatrix& gens, const IntVector& grading,
                                  const std::vector<Relation>& relations, std::size_t bound) {
  const std::size_t k = gens.cols();
  if (k == 0) return;
  std::vector<mpz_class> weight(k);
  for (std::size_t j = 0; j < k; ++j) weight[j] = pairing(grading, gens.column(j));
  const mpz_class max_weight = *std::min_element(weight.begin(), weight.end()) *
                               static_cast<unsigned long>(bound);

  std::map<IntVector, std::vector<std::vector<std::int64_t>>> fibers;
  std::vector<std::int64_t> word(k, 0);
  IntVector value(gens.rows(), mpz_class(0));
  auto collect = [&](auto&& self, std::size_t j, std::size_t remaining, const mpz_class& w) -> void {
    if (j == k) {
      fibers[value].push_back(word);
      return;
    }
    for (std::size_t c = 0;; ++c) {
      word[j] = static_cast<std::int64_t>(c);
      self(self, j + 1, remaining - c, w + weight[j] * static_cast<unsigned long>(c));
      if (c == remaining || w + weight[j] * static_cast<unsigned long>(c + 1) > max_weight) break;
      for (std::size_t i = 0; i < gens.rows(); ++i) value[i] += gens(i, j);
    }
    for (std::size_t i = 0; i < gens.rows(); ++i) value[i] -= gens(i, j) * word[j];
    word[j] = 0;
  };
  collect(collect, 0, bound, mpz_class(0));

  for (const auto& [x, fiber] : fibers) {
    if (fiber.size() < 2) continue;

    std::set<std::vector<std::int64_t>> seen{fiber.front()};
    std::deque<std::vector<std::int64_t>> queue{fiber.front()};
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      for (const Relation& rel : relations) {
        for (int dir = 0; dir < 2; ++dir) {
          const auto& from = dir == 0 ? rel.lhs : rel.rhs;
          const auto& to = dir == 0 ? rel.rhs : rel.lhs;
          bool applies = true;
          for (std::size_t j = 0; j < k && applies; ++j) applies = cur[j] >= from[j];
          if (!applies) continue;
          auto next = cur;
          for (std::size_t j = 0; j < k; ++j) next[j] += to[j] - from[j];
          if (seen.insert(next).second) queue.push_back(std::move(next));
        }
      }
    }
    if (seen.size() != fiber.size()) {
      const auto missing = std::find_if(fiber.begin(), fiber.end(),
                                        [&](const auto& w) { return !seen.count(w); });
      std::ostringstream os;
      os << "relations do not connect the words";
      for (const auto* w : {&fiber.front(), &*missing}) {
        os << " [";
        for (std::size_t j = 0; j < k; ++j) os << (j ? "," : "") << (*w)[j];
        os << ']';
      }
      os << " which both evaluate to " << vector_to_string(x);
      throw Error(ErrorKind::RelationsIncomplete, os.str());
    }
  }
}

void enumerate_l1_ball(std::size_t dim, std::size_t bound,
                       const std::function<void(const IntVector&)>& visit) {
  IntVector point(dim, mpz_class(0));
  auto rec = [&](auto&& self, std::size_t i, long remaining) -> void {
    if (i == dim) {
      visit(point);
      return;
    }
    for (long v = -remaining; v <= remaining; ++v) {
      point[i] = v;
      self(self, i + 1, remaining - (v < 0 ? -v : v));
    }
    point[i] = 0;
  };
  rec(rec, 0, static_cast<long>(bound));
}

bool certificate_holds(const IntMatrix& gens, const Face& f) {
  if (f.certificate.size() != gens.rows()) return false;
  for (std::size_t j = 0; j < gens.cols(); ++j) {
    const mpq_class value = detail::dot(f.certificate, gens.column(j));
    if (f.contains(j) ? value != 0 : value <= 0) return false;
  }
  return true;
}

}  // namespace

namespace detail {

MembershipOracle::MembershipOracle(std::vector<IntVector> generators, IntVector grading)
    : generators_(std::move(generators)), grading_(std::move(grading)) {
  for (const auto& g : generators_) weights_.push_back(pairing(grading_, g));
}

bool MembershipOracle::contains(const IntVector& x) {
  if (std::all_of(x.begin(), x.end(), [](const mpz_class& v) { return v == 0; })) return true;
  const mpz_class w = pairing(grading_, x);
  if (w <= 0) return false;
  if (auto it = memo_.find(x); it != memo_.end()) return it->second;
  bool found = false;
  for (std::size_t j = 0; j < generators_.size() && !found; ++j) {
    if (weights_[j] > w) continue;
    IntVector rest = x;
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= generators_[j][i];
    found = contains(rest);
  }
  memo_.emplace(x, found);
  return found;
}

}  // namespace detail

bool Face::contains(std::size_t generator) const {
  return std::binary_search(support.begin(), support.end(), generator);
}

bool Face::is_subface_of(const Face& other) const {
  return std::includes(other.support.begin(), other.support.end(), support.begin(),
                       support.end());
}

bool AffineMonoid::contains(const IntVector& x) const {
  if (x.size() != ambient_rank()) {
    throw Error(ErrorKind::InvalidArgument, "contains: vector has the wrong dimension");
  }
  detail::MembershipOracle oracle(spec_.generators, grading_);
  return oracle.contains(x);
}

AffineMonoid validate(MonoidSpec spec, const ValidationOptions& options) {
  const std::size_t d = spec.ambient_rank;
  const std::size_t k = spec.generators.size();
  if (k > 20) {
    throw Error(ErrorKind::InvalidArgument, "more than 20 generators is beyond desk scale");
  }
  for (std::size_t j = 0; j < k; ++j) {
    const auto& g = spec.generators[j];
    if (g.size() != d) {
      throw Error(ErrorKind::InvalidArgument,
                  "generator " + std::to_string(j + 1) + " has length " +
                      std::to_string(g.size()) + ", expected " + std::to_string(d));
    }
    if (std::all_of(g.begin(), g.end(), [](const mpz_class& v) { return v == 0; })) {
      throw Error(ErrorKind::InvalidArgument,
                  "generator " + std::to_string(j + 1) + " is the zero vector");
    }
  }
  const IntMatrix gens = IntMatrix::from_columns(d, spec.generators);

  if (spec.relations) {
    for (std::size_t i = 0; i < spec.relations->size(); ++i) {
      const Relation& rel = (*spec.relations)[i];
      const std::string name = "relation " + std::to_string(i + 1);
      if (rel.lhs.size() != k || rel.rhs.size() != k) {
        throw Error(ErrorKind::InvalidArgument, name + " does not have one exponent per generator");
      }
      auto negative = [](std::int64_t v) { return v < 0; };
      if (std::any_of(rel.lhs.begin(), rel.lhs.end(), negative) ||
          std::any_of(rel.rhs.begin(), rel.rhs.end(), negative)) {
        throw Error(ErrorKind::InvalidArgument, name + " has a negative exponent");
      }
      const IntVector lhs = combine(gens, rel.lhs);
      const IntVector rhs = combine(gens, rel.rhs);
      if (lhs != rhs) {
        throw Error(ErrorKind::RelationInconsistent, name + ": left side evaluates to " +
                                                         vector_to_string(lhs) +
                                                         " but right side to " +
                                                         vector_to_string(rhs));
      }
    }
  }

  const auto sharp = detail::separating_functional(d, {}, spec.generators);
  if (!sharp) {
    throw Error(ErrorKind::NotSharp, "the cone spanned by the generators contains a line");
  }

  AffineMonoid m;
  m.degree_bound_ = options.degree_bound;
  m.generator_matrix_ = gens;
  m.grading_ = detail::clear_denominators(*sharp);

  const SmithForm snf = smith_normal_form(gens);
  m.gp_rank_ = snf.rank;
  m.lattice_coordinates_ = IntMatrix(snf.rank, k);
  {
    const IntMatrix ug = snf.U * gens;
    for (std::size_t i = 0; i < snf.rank; ++i)
      for (std::size_t j = 0; j < k; ++j) m.lattice_coordinates_(i, j) = ug(i, j) / snf.D(i, i);
  }

  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::size_t> support;
    std::vector<IntVector> vanish, positive;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (1u << j)) {
        support.push_back(j);
        vanish.push_back(spec.generators[j]);
      } else {
        positive.push_back(spec.generators[j]);
      }
    }
    if (auto u = detail::separating_functional(d, vanish, positive)) {
      m.faces_.push_back(Face{std::move(support), std::move(*u)});
    }
  }
  std::sort(m.faces_.begin(), m.faces_.end(), [](const Face& a, const Face& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return a.support < b.support;
  });

  if (!spec.relations) {
    spec.relations = relations_from_kernel(gens);
    m.relations_synthesized_ = true;
  }
  verify_relation_completeness(gens, m.grading_, *spec.relations, options.degree_bound);

  if (m.gp_rank_ > 0) {
    std::vector<const Face*> facets;
    for (const Face& f : m.faces_) {
      IntMatrix fg(d, f.support.size());
      for (std::size_t c = 0; c < f.support.size(); ++c)
        for (std::size_t i = 0; i < d; ++i) fg(i, c) = gens(i, f.support[c]);
      if (matrix_rank(fg) + 1 == m.gp_rank_) facets.push_back(&f);
    }
    detail::MembershipOracle oracle(spec.generators, m.grading_);
    enumerate_l1_ball(d, options.degree_bound, [&](const IntVector& y) {
      const IntVector uy = snf.U.apply(y);
      for (std::size_t i = 0; i < d; ++i) {
        if (i < snf.rank ? uy[i] % snf.D(i, i) != 0 : uy[i] != 0) return;
      }
      for (const Face* f : facets)
        if (detail::dot(f->certificate, y) < 0) return;
      if (!oracle.contains(y)) {
        throw Error(ErrorKind::SaturationFailure,
                    "lattice point " + vector_to_string(y) +
                        " lies in the cone but is not a sum of generators");
      }
    });
  }

  m.spec_ = std::move(spec);
  return m;
}

const std::vector<Face>& faces(const AffineMonoid& m) { return m.faces(); }

Face face_with_support(const AffineMonoid& m, std::vector<std::size_t> support) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (const Face& f : m.faces())
    if (f.support == support) return f;
  throw Error(ErrorKind::NotAFace, support_to_string(support) + " is not a face");
}

std::size_t face_lattice_rank(const AffineMonoid& m, const Face& f) {
  const IntMatrix& coords = m.lattice_coordinates();
  IntMatrix fc(coords.rows(), f.support.size());
  for (std::size_t c = 0; c < f.support.size(); ++c)
    for (std::size_t i = 0; i < coords.rows(); ++i) fc(i, c) = coords(i, f.support[c]);
  return matrix_rank(fc);
}

Stalk stalk(const AffineMonoid& m, const Face& f) {
  if (!certificate_holds(m.generator_matrix(), f)) {
    // A face given by support alone is accepted if the lattice has it.
    return stalk(m, face_with_support(m, f.support));
  }
  const IntMatrix& coords = m.lattice_coordinates();
  const std::size_t r = coords.rows();
  IntMatrix fc(r, f.support.size());
  for (std::size_t c = 0; c < f.support.size(); ++c)
    for (std::size_t i = 0; i < r; ++i) fc(i, c) = coords(i, f.support[c]);
  const SmithForm snf = smith_normal_form(fc);
  for (std::size_t i = 0; i < snf.rank; ++i) {
    if (snf.D(i, i) != 1) {
      throw Error(ErrorKind::SaturationFailure,
                  "the lattice of face " + support_to_string(f.support) +
                      " is not saturated in the group lattice");
    }
  }
  const std::size_t quotient_rank = r - snf.rank;

  std::vector<IntVector> images;
  for (std::size_t j = 0; j < m.generator_count(); ++j) {
    if (f.contains(j)) continue;
    const IntVector full = snf.U.apply(coords.column(j));
    IntVector q(full.begin() + static_cast<std::ptrdiff_t>(snf.rank), full.end());
    if (std::find(images.begin(), images.end(), q) == images.end()) images.push_back(std::move(q));
  }

  // Keep only indecomposable images.
  if (!images.empty()) {
    const auto grading = detail::separating_functional(quotient_rank, {}, images);
    if (!grading) throw Error(ErrorKind::NotSharp, "stalk quotient is not sharp");
    const IntVector w = detail::clear_denominators(*grading);
    for (std::size_t j = 0; j < images.size();) {
      std::vector<IntVector> others = images;
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(j));
      detail::MembershipOracle oracle(others, w);
      if (oracle.contains(images[j])) {
        images = std::move(others);
        j = 0;
      } else {
        ++j;
      }
    }
  }

  MonoidSpec qspec{quotient_rank, std::move(images), std::nullopt};
  return Stalk{validate(std::move(qspec), ValidationOptions{m.degree_bound()}), quotient_rank};
}

KummerExtension kummer(const AffineMonoid& m, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "kummer needs n >= 1");
  return KummerExtension{m, IntMatrix::scalar(m.gp_lattice_rank(),
                                               mpz_class(static_cast<unsigned long>(n)))};
}

FgAbelianGroup mu(const AffineMonoid& m, std::uint64_t n) {
  return cokernel(kummer(m, n).inclusion_matrix);
}

std::string support_to_string(const std::vector<std::size_t>& support) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < support.size(); ++i) os << (i ? "," : "") << support[i] + 1;
  os << '}';
  return os.str();
}

}  // namespace kato
