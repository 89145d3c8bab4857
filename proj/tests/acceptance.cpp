// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "kato/fibers.hpp"
#include "kato/strata.hpp"
#include "support.hpp"

namespace kato {
namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  std::ostringstream problems;
  void fail(const std::string& what) {
    if (problems.tellp() < 600) problems << what << "; ";
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

std::uint64_t power(std::uint64_t n, std::size_t e) {
  std::uint64_t out = 1;
  while (e--) out *= n;
  return out;
}

FgAbelianGroup cyclic(Level n) { return FgAbelianGroup::from_cyclic_orders({mpz_class(n)}); }

void log_point_equivalence(Check& c) {
  const AffineMonoid m = test::corpus_monoid("log_point.json");
  const Face vertex = faces(m).front();
  c.expect(vertex.support.empty(), "vertex face is not the empty support");
  const FiberEquivalenceCertificate cert = verify_fiber_equivalence(m, vertex, 100);
  c.expect(cert.equivalent, "not equivalent: " + cert.failure);
  c.expect(cert.levels.size() == 100, "expected 100 levels");
  for (const auto& level : cert.levels) {
    c.expect(level.kn_side == cyclic(level.n) && level.root_side == cyclic(level.n),
             "level " + std::to_string(level.n) + " is not Z/n on both sides");
    const GroupMap reduction{CyclicSum::free(1), CyclicSum::uniform(1, level.n), IntMatrix{{1}}};
    c.expect(comparison_on_pi1(m, vertex, level.n).same_map(reduction),
             "comparison at " + std::to_string(level.n) + " is not reduction mod n");
  }
}

void finite_products(Check& c) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::vector<FiniteAbelianProSystem> factors(k, completion(FgAbelianGroup::free(1)));
    const auto cert = equivalent_up_to(completion(FgAbelianGroup::free(k)), product(factors), 100);
    c.expect(cert.equivalent, "k=" + std::to_string(k) + ": " + cert.reason);
    c.expect(cert.levels.size() == 100, "k=" + std::to_string(k) + ": expected 100 levels");
    for (const auto& level : cert.levels)
      c.expect(level.a.torsion() == level.b.torsion() && level.a.free_rank() == level.b.free_rank(),
               "k=" + std::to_string(k) + " level " + std::to_string(level.n) + " invariant factors differ");
  }
}

void torsor_property(Check& c) {
  const std::vector<std::pair<std::string, std::size_t>> charts{
      {"log_point.json", 1}, {"n2.json", 2}, {"a1_cone.json", 2}};
  for (const auto& [file, rank] : charts) {
    const AffineMonoid m = test::corpus_monoid(file);
    c.expect(m.gp_lattice_rank() == rank, file + ": unexpected rank");
    const auto& fs = faces(m);
    std::vector<KnPoint> points;
    for (std::uint64_t i = 0; i < 5; ++i) points.push_back(sample_kn_stratum(m, fs[i % fs.size()], 1, 100 + i).front());
    for (Level n = 1; n <= 8; ++n)
      for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string where = file + " n=" + std::to_string(n) + " point " + std::to_string(i);
        const TorsorReport exact = torsor_check(m, points[i], n);
        c.expect(exact.is_torsor, where + " exact: " + exact.failure);
        c.expect(exact.group_order == power(n, rank), where + ": group order");
        c.expect(exact.max_residual == 0.0, where + ": exact residual not zero");
        const TorsorReport floating = torsor_check(m, points[i].to_floating(), n);
        c.expect(floating.is_torsor, where + " floating: " + floating.failure);
        c.expect(floating.group_order == power(n, rank), where + ": floating group order");
        c.expect(floating.max_residual <= 1e-9, where + ": floating residual above 1e-9");
      }
  }
}

void ramification_contrast(Check& c) {
  const AffineMonoid m = test::corpus_monoid("log_point.json");
  const CxPoint origin = CxPoint::exact({GaussianRational(0)});
  for (Level n = 1; n <= 8; ++n) {
    c.expect(algebraic_kummer_fiber(m, origin, n).size() == 1,
             "algebraic fiber over the vertex has more than one point at n=" + std::to_string(n));
    for (const mpq_class& turns : {mpq_class(0), mpq_class(1, 3), mpq_class(5, 8)}) {
      const KnPoint p = KnPoint::exact({{Radical{0, 1}, turns}});
      c.expect(kn_kummer_fiber(m, p, n).size() == n, "KN fiber size differs from n=" + std::to_string(n));
    }
  }
}

void stratification_laws(Check& c) {
  for (const auto& file : test::corpus_files()) {
    const AffineMonoid m = test::corpus_monoid(file);
    const StratumTable t = stratify(m);
    std::size_t at_max = 0;
    for (const auto& e : t.entries)
      if (e.stalk_rank == t.max_rank) {
        ++at_max;
        c.expect(e.face.support.empty(), file + ": a nonempty face attains the maximal rank");
      }
    c.expect(at_max == 1, file + ": maximal rank is not attained exactly once");
    for (const auto& a : t.entries)
      for (const auto& b : t.entries)
        if (a.face.is_subface_of(b.face))
          c.expect(b.stalk_rank <= a.stalk_rank, file + ": rank increases along face inclusion");
    std::vector<std::vector<std::size_t>> found;
    for (const auto& f : faces(m)) found.push_back(f.support);
    c.expect(found == test::subset_face_oracle(m.spec(), 12), file + ": faces differ from the subset oracle");
  }
}

void semialgebraic_emission(Check& c) {
  const AffineMonoid m = test::corpus_monoid("a1_cone.json");
  const std::vector<Relation> expected{{{1, 0, 1}, {0, 2, 0}}};
  const BinomialSystem cx = emit_equations(m, Target::ComplexPoints);
  const BinomialSystem kn = emit_equations(m, Target::KnPoints);
  c.expect(cx.equations == expected && kn.equations == expected, "emitted system is not z1 z3 = z2^2");
  c.expect(cx.variable_count == 3, "expected three variables");
  const Face dense = faces(m).back();
  const auto samples = sample_kn_stratum(m, dense, 100, 2024);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const MembershipResult r = check_membership(kn, samples[i], 1e-12);
    c.expect(samples[i].is_exact() && r.member && r.max_residual == 0.0,
             "sample " + std::to_string(i) + " residual is not exactly zero");
    const MembershipResult image = check_membership(cx, tau(samples[i]), 1e-12);
    c.expect(image.member && image.max_residual <= 1e-12,
             "tau image of sample " + std::to_string(i) + " has residual above 1e-12");
  }
  for (const auto& p : sample_stratum(m, dense, 100, 2024)) {
    const MembershipResult r = check_membership(cx, p, 1e-12);
    c.expect(r.member && r.max_residual == 0.0, "complex sample residual is not exactly zero");
  }
}

void smith_oracle(Check& c) {
  std::mt19937_64 rng(500);
  int finite = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const IntMatrix m = test::random_matrix(rng, 4, -5, 5);
    const std::string where = "matrix " + m.to_string();
    const SmithForm s = smith_normal_form(m);
    c.expect(s.U * m * s.V == s.D, where + ": U m V != D");
    auto rows_of = [](const IntMatrix& a) {
      std::vector<std::vector<mpz_class>> out;
      for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(a.row(i));
      return out;
    };
    c.expect(abs(test::laplace_det(rows_of(s.U))) == 1 && abs(determinant(s.U)) == 1, where + ": U not unimodular");
    c.expect(abs(test::laplace_det(rows_of(s.V))) == 1 && abs(determinant(s.V)) == 1, where + ": V not unimodular");
    for (std::size_t i = 0; i < s.D.rows(); ++i)
      for (std::size_t j = 0; j < s.D.cols(); ++j)
        if (i != j) c.expect(s.D(i, j) == 0, where + ": D not diagonal");
    const auto d = s.invariant_factors();
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      c.expect(d[i] > 0 && d[i + 1] % d[i] == 0, where + ": divisibility chain broken");
    const auto order = cokernel(m).order();
    const auto cosets = test::coset_count(m);
    c.expect(order.has_value() == cosets.has_value(), where + ": finiteness disagrees");
    if (order && cosets) {
      ++finite;
      c.expect(*order == static_cast<unsigned long>(*cosets), where + ": order differs from coset count");
      c.expect(*order == test::maximal_minor_gcd(m), where + ": order differs from minor gcd");
    }
  }
}

void tower_coherence(Check& c) {
  constexpr Level bound = 60;
  for (const auto& file : test::corpus_files()) {
    const AffineMonoid m = test::corpus_monoid(file);
    const CoherenceReport whole = check_coherence(mu_tower(m), bound);
    c.expect(whole.coherent, file + ": " + whole.failure);
    for (const auto& f : faces(m)) {
      const std::string where = file + " face " + support_to_string(f.support);
      const RootFiberTower root = root_fiber_tower(m, f);
      const CoherenceReport r = check_coherence(root.tower, bound);
      c.expect(r.coherent, where + ": " + r.failure);
      const FiniteAbelianProSystem torus = completion(FgAbelianGroup::free(root.rank));
      std::vector<GroupMap> comparison(bound + 1);
      for (Level n = 1; n <= bound; ++n) comparison[n] = comparison_on_pi1(m, f, n);
      for (Level big = 1; big <= bound; ++big)
        for (Level small = 1; small <= big; ++small) {
          if (big % small != 0) continue;
          const std::string pair = " " + std::to_string(big) + "->" + std::to_string(small);
          c.expect(is_isomorphic(tensor_mod(root.tower.level(big), small), root.tower.level(small)),
                   where + pair + ": level is not the reduction of the higher level");
          const GroupMap down = root.tower.transition(big, small);
          c.expect(down.compose(comparison[big]).same_map(comparison[small]),
                   where + pair + ": comparison does not commute with the transition");
          const GroupMap at_big{torus.presentation(big), comparison[big].target, comparison[big].matrix};
          const GroupMap at_small{torus.presentation(small), comparison[small].target, comparison[small].matrix};
          c.expect(at_small.compose(torus.transition(big, small)).same_map(down.compose(at_big)),
                   where + pair + ": level square does not commute");
        }
    }
  }
}

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace kato

int main() {
  using namespace kato;
  const std::vector<Criterion> criteria{
      {1, "log-point fiber equivalence, bound 100", 1.0, log_point_equivalence},
      {2, "completion of Z^k vs k-fold product, k=1..4, bound 100", 1.0, finite_products},
      {3, "torsor property on N, N^2, A1-cone, n=1..8, 5 points", 10.0, torsor_property},
      {4, "ramification contrast at the vertex of N, n<=8", 0.0, ramification_contrast},
      {5, "rank stratification laws on the corpus", 0.0, stratification_laws},
      {6, "A1-cone equation emission and 100 dense samples", 0.0, semialgebraic_emission},
      {7, "Smith normal form oracle suite, 500 matrices", 30.0, smith_oracle},
      {8, "tower coherence and comparison squares, n|m<=60", 0.0, tower_coherence},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (cr.time_limit > 0 && seconds >= cr.time_limit) {
      std::ostringstream os;
      os << "runtime " << seconds << " s exceeds " << cr.time_limit << " s";
      check.fail(os.str());
    }
    const std::string problems = check.problems.str();
    const bool pass = problems.empty();
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << cr.id << ": " << cr.title << " ("
              << std::fixed << std::setprecision(3) << seconds << " s)";
    if (!pass) std::cout << "\n      " << problems;
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
