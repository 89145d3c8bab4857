#include "kato/fibers.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "kato/error.hpp"
#include "kato/strata.hpp"

namespace kato {

namespace {

constexpr std::uint64_t kEnumerationLimit = 10'000'000;

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && out > kEnumerationLimit / base) {
      throw Error(ErrorKind::InvalidArgument, "fiber enumeration is beyond desk scale");
    }
    out *= base;
  }
  return out;
}

void require_positive(Level n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
}

// Odometer over [0, n)^len with the first index most significant.
bool next_tuple(std::vector<std::uint64_t>& t, Level n) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < n) return true;
    t[i] = 0;
  }
  return false;
}

// A wrong root choice is off by a nontrivial n-th root of unity, so its
// relative residual is close to at least 2 sin(pi/n). Residuals between the
// accept threshold and half of that cannot be classified.
double ambiguity_gap(Level n) {
  return n < 2 ? 2.0 : std::sin(std::numbers::pi / static_cast<double>(n));
}

void require_separable(double accept, Level n) {
  if (accept >= ambiguity_gap(n)) {
    std::ostringstream os;
    os << "tolerance " << accept << " cannot separate the " << n << "-th roots of unity";
    throw Error(ErrorKind::ToleranceBreach, os.str());
  }
}

double relative_gap(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

std::complex<double> ipow(std::complex<double> z, std::int64_t e) {
  std::complex<double> acc(1.0);
  for (std::int64_t i = 0; i < e; ++i) acc *= z;
  return acc;
}

std::complex<double> root_of_unity(std::uint64_t k, Level n) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

double validate_point(const AffineMonoid& m, const KnPoint& p, double tol) {
  if (p.size() != m.generator_count()) {
    throw Error(ErrorKind::InvalidPoint, "point has " + std::to_string(p.size()) +
                                             " coordinates for " +
                                             std::to_string(m.generator_count()) + " generators");
  }
  for (const auto& v : p.values()) {
    if (std::abs(std::abs(v.phase) - 1.0) > tol) {
      throw Error(ErrorKind::InvalidPoint, "angle coordinate is not on the unit circle");
    }
  }
  const MembershipResult check = check_membership(emit_equations(m, Target::KnPoints), p, tol);
  if (!check.member) {
    std::ostringstream os;
    os << "point violates equation " << *check.worst_equation + 1 << " (residual "
       << check.max_residual << ")";
    throw Error(ErrorKind::InvalidPoint, os.str());
  }
  return check.max_residual;
}

GroupMap comparison_into(const RootFiberTower& root, Level n) {
  const CyclicSum target = root.tower.presentation(n);
  return GroupMap{CyclicSum::free(root.rank), target, IntMatrix::identity(root.rank)};
}

std::string level_pair(Level m, Level n) {
  return std::to_string(m) + "->" + std::to_string(n);
}

}  // namespace

KnFiberModel kn_fiber(const AffineMonoid& m, const Face& f) {
  const Stalk s = stalk(m, f);
  return KnFiberModel{face_with_support(m, f.support), s.rank, FgAbelianGroup::free(s.rank)};
}

RootFiberTower root_fiber_tower(const AffineMonoid& m, const Face& f) {
  const Stalk s = stalk(m, f);
  return RootFiberTower{face_with_support(m, f.support), s.rank, mu_tower(s.quotient)};
}

GroupMap comparison_on_pi1(const AffineMonoid& m, const Face& f, Level n) {
  require_positive(n);
  return comparison_into(root_fiber_tower(m, f), n);
}

FiberEquivalenceCertificate verify_fiber_equivalence(const AffineMonoid& m, const Face& f,
                                                     Level bound) {
  if (bound == 0) throw Error(ErrorKind::InvalidArgument, "bound must be >= 1");
  const KnFiberModel kn = kn_fiber(m, f);
  const RootFiberTower root = root_fiber_tower(m, f);
  const ClassifyingProSpace torus = profinite_type(K1HomotopyType{kn.pi1});
  const ClassifyingProSpace roots = classifying_pro_space(root.tower);

  FiberEquivalenceCertificate cert;
  cert.rank = kn.torus_rank;
  cert.bound = bound;
  cert.pro = equivalent_up_to(torus, roots, bound);
  if (!cert.pro.equivalent) {
    cert.equivalent = false;
    cert.failure = "pro-systems differ: " + cert.pro.reason;
  }

  const auto& lhs = torus.fundamental_groups();
  const auto& rhs = roots.fundamental_groups();
  std::vector<GroupMap> comparison(bound + 1), induced(bound + 1);
  for (Level n = 1; n <= bound; ++n) {
    comparison[n] = comparison_into(root, n);
    induced[n] = GroupMap{lhs.presentation(n), comparison[n].target, comparison[n].matrix};
    cert.levels.push_back(
        FiberLevelRecord{n, lhs.level(n), rhs.level(n), induced[n].matrix});
    if (cert.equivalent && !(comparison[n].is_well_defined() && induced[n].is_well_defined() &&
                             induced[n].is_isomorphism())) {
      cert.equivalent = false;
      cert.failure = "comparison at level " + std::to_string(n) + " is not an isomorphism";
    }
  }
  for (Level hi = 1; hi <= bound && cert.equivalent; ++hi)
    for (Level lo = 1; lo < hi && cert.equivalent; ++lo) {
      if (hi % lo != 0) continue;
      const GroupMap down = rhs.transition(hi, lo);
      if (!down.compose(comparison[hi]).same_map(comparison[lo])) {
        cert.equivalent = false;
        cert.failure = "comparison does not commute with transition " + level_pair(hi, lo);
      } else if (!induced[lo].compose(lhs.transition(hi, lo)).same_map(down.compose(induced[hi]))) {
        cert.equivalent = false;
        cert.failure = "induced maps do not commute with transition " + level_pair(hi, lo);
      }
    }
  return cert;
}

std::vector<KnPoint> kn_kummer_fiber(const AffineMonoid& m, const KnPoint& p, Level n,
                                     double tol) {
  require_positive(n);
  const double input_residual = validate_point(m, p, tol);
  const std::size_t k = m.generator_count();
  const auto& relations = m.relations();
  const std::uint64_t expected = checked_power(n, m.gp_lattice_rank());
  checked_power(n, k);

  std::vector<KnPoint> fiber;
  std::vector<std::uint64_t> idx(k, 0);
  if (p.is_exact()) {
    // sum_j (lhs_j - rhs_j) theta_j is an integer c; the root choice idx
    // survives iff c + sum_j (lhs_j - rhs_j) idx_j == 0 mod n.
    std::vector<mpz_class> offsets;
    for (const Relation& rel : relations) {
      mpq_class c = 0;
      for (std::size_t j = 0; j < k; ++j)
        c += mpq_class(static_cast<long>(rel.lhs[j] - rel.rhs[j])) * p.exact_values()[j].turns;
      offsets.push_back(c.get_num());
    }
    const mpz_class modulus(static_cast<unsigned long>(n));
    do {
      bool ok = true;
      for (std::size_t e = 0; e < relations.size() && ok; ++e) {
        mpz_class s = offsets[e];
        for (std::size_t j = 0; j < k; ++j)
          s += (relations[e].lhs[j] - relations[e].rhs[j]) * static_cast<long>(idx[j]);
        ok = s % modulus == 0;
      }
      if (!ok) continue;
      std::vector<ExactKnCoordinate> coords;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& v = p.exact_values()[j];
        mpq_class turns = (v.turns + static_cast<unsigned long>(idx[j])) / modulus;
        turns.canonicalize();
        coords.push_back({v.radius.root(n), turns});
      }
      fiber.push_back(KnPoint::exact(std::move(coords)));
    } while (next_tuple(idx, n));
  } else {
    const double accept = std::max(tol, input_residual);
    const double gap = ambiguity_gap(n);
    require_separable(accept, n);
    std::vector<std::complex<double>> base;
    std::vector<double> radii;
    for (const auto& v : p.values()) {
      base.push_back(std::polar(1.0, std::arg(v.phase) / static_cast<double>(n)));
      radii.push_back(std::pow(v.radius, 1.0 / static_cast<double>(n)));
    }
    do {
      std::vector<std::complex<double>> phase(k);
      for (std::size_t j = 0; j < k; ++j) phase[j] = base[j] * root_of_unity(idx[j], n);
      bool ok = true;
      for (std::size_t e = 0; e < relations.size() && ok; ++e) {
        std::complex<double> lhs(1.0), rhs(1.0);
        for (std::size_t j = 0; j < k; ++j) {
          lhs *= ipow(phase[j], relations[e].lhs[j]);
          rhs *= ipow(phase[j], relations[e].rhs[j]);
        }
        const double residual = relative_gap(lhs, rhs);
        if (residual > accept && residual < gap) {
          std::ostringstream os;
          os << "relation " << e + 1 << " has residual " << residual
             << " while filtering roots; the tolerance " << tol << " is misconfigured";
          throw Error(ErrorKind::ToleranceBreach, os.str());
        }
        ok = residual <= accept;
      }
      if (!ok) continue;
      std::vector<FloatKnCoordinate> coords;
      for (std::size_t j = 0; j < k; ++j) coords.push_back({radii[j], phase[j]});
      fiber.push_back(KnPoint::floating(std::move(coords)));
    } while (next_tuple(idx, n));
  }

  if (fiber.size() != expected) {
    throw Error(ErrorKind::FiberCardinalityMismatch,
                "Kummer fiber has " + std::to_string(fiber.size()) + " points, expected " +
                    std::to_string(expected));
  }
  return fiber;
}

std::vector<CxPoint> algebraic_kummer_fiber(const AffineMonoid& m, const CxPoint& p, Level n,
                                            double tol) {
  require_positive(n);
  if (p.size() != m.generator_count()) {
    throw Error(ErrorKind::InvalidPoint, "point has " + std::to_string(p.size()) +
                                             " coordinates for " +
                                             std::to_string(m.generator_count()) + " generators");
  }
  const MembershipResult check = check_membership(emit_equations(m, Target::ComplexPoints), p, tol);
  if (!check.member) throw Error(ErrorKind::InvalidPoint, "point is not on C(P)");
  Face face;
  try {
    face = stratum_of_point(m, p, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidPoint, e.what());
  }
  const std::size_t k = m.generator_count();
  const auto& relations = m.relations();
  const std::uint64_t expected = checked_power(n, face_lattice_rank(m, face));
  checked_power(n, face.support.size());

  std::vector<std::complex<double>> base(k, 0.0);
  for (std::size_t j : face.support) {
    const auto z = p.values()[j];
    base[j] = std::polar(std::pow(std::abs(z), 1.0 / static_cast<double>(n)),
                         std::arg(z) / static_cast<double>(n));
  }
  double input_relative = 0.0;
  for (const Relation& rel : relations) {
    std::complex<double> lhs(1.0), rhs(1.0);
    for (std::size_t j = 0; j < k; ++j) {
      lhs *= ipow(p.values()[j], rel.lhs[j]);
      rhs *= ipow(p.values()[j], rel.rhs[j]);
    }
    if (lhs != 0.0 || rhs != 0.0) input_relative = std::max(input_relative, relative_gap(lhs, rhs));
  }
  const double accept = std::max(tol, input_relative);
  const double gap = ambiguity_gap(n);
  require_separable(accept, n);

  std::vector<CxPoint> fiber;
  std::vector<std::uint64_t> idx(face.support.size(), 0);
  do {
    std::vector<std::complex<double>> w(k, 0.0);
    for (std::size_t c = 0; c < face.support.size(); ++c)
      w[face.support[c]] = base[face.support[c]] * root_of_unity(idx[c], n);
    bool ok = true;
    for (std::size_t e = 0; e < relations.size() && ok; ++e) {
      std::complex<double> lhs(1.0), rhs(1.0);
      for (std::size_t j = 0; j < k; ++j) {
        lhs *= ipow(w[j], relations[e].lhs[j]);
        rhs *= ipow(w[j], relations[e].rhs[j]);
      }
      if (lhs == 0.0 && rhs == 0.0) continue;
      const double residual = relative_gap(lhs, rhs);
      if (residual > accept && residual < gap) {
        std::ostringstream os;
        os << "relation " << e + 1 << " has residual " << residual << " while filtering roots";
        throw Error(ErrorKind::ToleranceBreach, os.str());
      }
      ok = residual <= accept;
    }
    if (ok) fiber.push_back(CxPoint::floating(std::move(w)));
  } while (next_tuple(idx, n));

  if (fiber.size() != expected) {
    throw Error(ErrorKind::FiberCardinalityMismatch,
                "algebraic Kummer fiber has " + std::to_string(fiber.size()) +
                    " points, expected " + std::to_string(expected));
  }
  return fiber;
}

TorsorReport torsor_check(const AffineMonoid& m, const KnPoint& p, Level n, double tol) {
  const std::vector<KnPoint> fiber = kn_kummer_fiber(m, p, n, tol);
  const std::size_t r = m.gp_lattice_rank();
  const std::size_t k = m.generator_count();
  const IntMatrix& coords = m.lattice_coordinates();

  TorsorReport report;
  report.fiber_size = fiber.size();
  report.group_order = checked_power(n, r);

  const BinomialSystem extended = emit_equations(kummer(m, n).extended, Target::KnPoints);
  for (const auto& x : fiber)
    report.max_residual = std::max(report.max_residual, check_membership(extended, x, tol).max_residual);

  // Fiber lookup: exact points by their angles (radii agree across the
  // fiber), floating points by nearest match.
  std::map<std::vector<mpq_class>, std::size_t> exact_index;
  if (p.is_exact()) {
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      std::vector<mpq_class> key;
      for (const auto& v : fiber[i].exact_values()) key.push_back(v.turns);
      exact_index.emplace(std::move(key), i);
    }
  }
  const double match_tol = std::min(ambiguity_gap(n) / 2, std::max(1e3 * tol, 1e-12));
  const mpz_class modulus(static_cast<unsigned long>(n));

  std::vector<std::uint64_t> a(r, 0);
  do {
    report.group_elements.push_back(a);
    std::vector<std::size_t> row;
    for (const auto& x : fiber) {
      std::size_t target = fiber.size();
      if (p.is_exact()) {
        std::vector<mpq_class> key;
        for (std::size_t j = 0; j < k; ++j) {
          mpq_class shift = 0;
          for (std::size_t i = 0; i < r; ++i) shift += coords(i, j) * static_cast<unsigned long>(a[i]);
          mpq_class turns = x.exact_values()[j].turns + shift / modulus;
          key.push_back(normalize_turns(turns));
        }
        if (auto it = exact_index.find(key); it != exact_index.end()) target = it->second;
      } else {
        std::vector<std::complex<double>> moved(k);
        for (std::size_t j = 0; j < k; ++j) {
          double shift = 0;
          for (std::size_t i = 0; i < r; ++i)
            shift += coords(i, j).get_d() * static_cast<double>(a[i]);
          moved[j] = x.values()[j].phase * std::polar(1.0, 2.0 * std::numbers::pi * shift /
                                                                static_cast<double>(n));
        }
        for (std::size_t y = 0; y < fiber.size() && target == fiber.size(); ++y) {
          bool close = true;
          for (std::size_t j = 0; j < k && close; ++j)
            close = std::abs(fiber[y].values()[j].phase - moved[j]) <= match_tol;
          if (close) target = y;
        }
      }
      row.push_back(target);
    }
    report.orbit_table.push_back(std::move(row));
  } while (next_tuple(a, n));

  report.preserves_fiber = true;
  for (const auto& row : report.orbit_table)
    for (std::size_t t : row)
      if (t == fiber.size()) report.preserves_fiber = false;

  report.free = report.preserves_fiber;
  for (std::size_t g = 1; g < report.orbit_table.size() && report.free; ++g)
    for (std::size_t x = 0; x < fiber.size(); ++x)
      if (report.orbit_table[g][x] == x) {
        report.free = false;
        break;
      }

  std::set<std::size_t> orbit;
  for (const auto& row : report.orbit_table)
    if (!row.empty()) orbit.insert(row.front());
  report.transitive = report.preserves_fiber && orbit.size() == fiber.size();

  report.is_torsor = report.preserves_fiber && report.free && report.transitive &&
                     report.group_order == fiber.size();
  if (!report.preserves_fiber) {
    report.failure = "the action moves a point out of the fiber";
  } else if (!report.free) {
    report.failure = "a nonidentity element fixes a point";
  } else if (!report.transitive) {
    report.failure = "the orbit of the first point is not the whole fiber";
  } else if (!report.is_torsor) {
    report.failure = "group order differs from fiber size";
  }
  return report;
}

}  // namespace kato
