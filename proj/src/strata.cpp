#include "kato/strata.hpp"

#include <algorithm>
#include <sstream>

#include "kato/error.hpp"

namespace kato {

std::vector<const StratumEntry*> StratumTable::at_least(std::size_t n) const {
  std::vector<const StratumEntry*> out;
  for (const auto& e : entries)
    if (e.stalk_rank >= n) out.push_back(&e);
  return out;
}

const StratumEntry& StratumTable::vertex() const {
  return *std::max_element(entries.begin(), entries.end(),
                           [](const StratumEntry& a, const StratumEntry& b) {
                             return a.stalk_rank < b.stalk_rank;
                           });
}

const StratumEntry& StratumTable::entry(const Face& f) const {
  for (const auto& e : entries)
    if (e.face.support == f.support) return e;
  throw Error(ErrorKind::NotAFace, support_to_string(f.support) + " is not a face");
}

StratumTable stratify(const AffineMonoid& m) {
  StratumTable table{m, {}, m.gp_lattice_rank()};
  for (const Face& f : m.faces()) {
    Stalk s = stalk(m, f);
    table.entries.push_back(StratumEntry{f, s.rank, std::move(s.quotient)});
  }
  return table;
}

Face stratum_of_point(const AffineMonoid& m, const CxPoint& p, double tol) {
  const MembershipResult check =
      check_membership(emit_equations(m, Target::ComplexPoints), p, tol);
  if (!check.member) {
    std::ostringstream os;
    os << "equation " << *check.worst_equation + 1 << " has residual " << check.max_residual;
    throw Error(ErrorKind::NotOnVariety, os.str());
  }
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const bool nonzero =
        p.is_exact() ? !p.exact_values()[j].is_zero() : std::abs(p.values()[j]) > tol;
    if (nonzero) support.push_back(j);
  }
  return face_with_support(m, support);
}

}  // namespace kato
