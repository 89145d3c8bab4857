#include <gtest/gtest.h>

#include <random>

#include "kato/profin.hpp"
#include "support.hpp"

namespace kato {
namespace {

using test::expect_kind;
using test::spec_of;

FgAbelianGroup group(std::initializer_list<long> orders) {
  return FgAbelianGroup::from_cyclic_orders({orders.begin(), orders.end()});
}

FgAbelianGroup cyclic_n(Level n) { return group({static_cast<long>(n)}); }

TEST(Completion, Levels) {
  const auto z = completion(FgAbelianGroup::free(1));
  const auto z2 = completion(FgAbelianGroup::free(2));
  for (Level n = 1; n <= 24; ++n) {
    EXPECT_EQ(z.level(n), cyclic_n(n));
    EXPECT_EQ(z2.level(n), tensor_mod(FgAbelianGroup::free(2), n));
  }
}

TEST(Completion, FiniteGroupStabilizes) {
  const auto s = completion(group({6}));
  for (Level n = 6; n <= 60; n += 6) EXPECT_EQ(s.level(n), group({6}));
  EXPECT_EQ(s.level(4), group({2}));
  expect_kind([&] { s.transition(4, 3); }, ErrorKind::InvalidArgument);
  expect_kind([&] { s.level(0); }, ErrorKind::InvalidArgument);
}

TEST(MuTower, Levels) {
  const auto n1 = mu_tower(validate(spec_of(1, {{1}})));
  const auto n2 = mu_tower(validate(spec_of(2, {{1, 0}, {0, 1}})));
  const auto empty = mu_tower(validate(spec_of(1, {})));
  for (Level n = 1; n <= 24; ++n) {
    EXPECT_EQ(n1.level(n), cyclic_n(n));
    EXPECT_EQ(n2.level(n), cokernel(IntMatrix::scalar(2, n)));
    EXPECT_TRUE(empty.level(n).is_trivial());
  }
}

TEST(Coherence, HoldsForBuiltSystems) {
  std::vector<FiniteAbelianProSystem> systems{
      completion(FgAbelianGroup::free(1)), completion(group({0, 4, 6})),
      product({completion(FgAbelianGroup::free(1)), completion(group({3}))}),
      mu_tower(validate(spec_of(2, {{1, 0}, {1, 1}, {1, 2}})))};
  for (const auto& s : systems) {
    const CoherenceReport r = check_coherence(s, 36);
    EXPECT_TRUE(r.coherent) << s.description() << ": " << r.failure;
  }
}

TEST(Coherence, DetectsNonSurjectiveTransition) {
  const FiniteAbelianProSystem doubled(
      "doubling", [](Level n) { return CyclicSum::uniform(1, n); },
      [](Level, Level) { return IntMatrix{{2}}; });
  EXPECT_FALSE(check_coherence(doubled, 4).coherent);
}

TEST(Equivalence, ProductOfCompletions) {
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<FiniteAbelianProSystem> factors(k, completion(FgAbelianGroup::free(1)));
    const auto cert = equivalent_up_to(completion(FgAbelianGroup::free(k)), product(factors), 100);
    EXPECT_TRUE(cert.equivalent) << cert.reason;
    EXPECT_EQ(cert.levels.size(), 100u);
  }
}

TEST(Equivalence, CompletionVsMuTower) {
  const auto cert = equivalent_up_to(completion(FgAbelianGroup::free(1)),
                                     mu_tower(validate(spec_of(1, {{1}}))), 100);
  EXPECT_TRUE(cert.equivalent);
}

TEST(Equivalence, RankMismatchWitness) {
  for (Level bound : {2, 3, 10}) {
    const auto cert =
        equivalent_up_to(completion(FgAbelianGroup::free(1)), completion(FgAbelianGroup::free(2)), bound);
    EXPECT_FALSE(cert.equivalent);
    ASSERT_TRUE(cert.witness_level.has_value());
    EXPECT_EQ(*cert.witness_level, 2u);
  }
  const auto at_one =
      equivalent_up_to(completion(FgAbelianGroup::free(1)), completion(FgAbelianGroup::free(2)), 1);
  EXPECT_TRUE(at_one.equivalent);
}

TEST(Equivalence, DetectsTransitionKernels) {
  // Same groups level by level, but the transition Z/4 -> Z/2 is zero.
  const FiniteAbelianProSystem odd(
      "zero transitions", [](Level n) { return CyclicSum::uniform(1, n); },
      [](Level from, Level to) { return IntMatrix{{from == to ? 1 : 0}}; });
  const auto cert = equivalent_up_to(completion(FgAbelianGroup::free(1)), odd, 4);
  EXPECT_FALSE(cert.equivalent);
  EXPECT_TRUE(cert.witness_transition.has_value());
}

TEST(Equivalence, FactorialIndicesAreCofinal) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> order(0, 6);
  std::uniform_int_distribution<int> len(0, 3);
  const std::vector<Level> factorials{1, 2, 6, 24, 120};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<mpz_class> a, b;
    for (int i = len(rng); i > 0; --i) a.emplace_back(order(rng));
    for (int i = len(rng); i > 0; --i) b.emplace_back(order(rng));
    const auto ga = FgAbelianGroup::from_cyclic_orders(a), gb = FgAbelianGroup::from_cyclic_orders(b);
    const auto ca = completion(ga), cb = completion(gb);
    const bool on_factorials = equivalent_on(ca, cb, factorials).equivalent;
    EXPECT_EQ(on_factorials, equivalent_up_to(ca, cb, 120).equivalent);
    EXPECT_EQ(on_factorials, is_isomorphic(ga, gb)) << ga.to_string() << " vs " << gb.to_string();
  }
}

TEST(ProSpaces, ClassifyingLevels) {
  const auto bz = classifying_pro_space(completion(FgAbelianGroup::free(1)));
  for (Level n = 1; n <= 10; ++n) EXPECT_EQ(bz.level(n), K1HomotopyType{cyclic_n(n)});
  const auto point = profinite_type(K1HomotopyType{FgAbelianGroup::trivial()});
  for (Level n = 1; n <= 10; ++n) EXPECT_TRUE(point.level(n).pi1.is_trivial());
  const auto torus = profinite_type(K1HomotopyType{FgAbelianGroup::free(3)});
  for (Level n = 1; n <= 10; ++n)
    EXPECT_EQ(torus.level(n).pi1, tensor_mod(FgAbelianGroup::free(3), n));
  EXPECT_EQ(profinite_type(K1HomotopyType{group({6})}).level(12).pi1, group({6}));
}

TEST(ProSpaces, TorusMatchesMuTowerOfSameRank) {
  const std::vector<MonoidSpec> specs{spec_of(1, {{1}}), spec_of(2, {{1, 0}, {0, 1}}),
                                      spec_of(2, {{1, 0}, {1, 1}, {1, 2}}),
                                      spec_of(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})};
  for (const auto& s : specs) {
    const AffineMonoid m = validate(s);
    const auto torus = profinite_type(K1HomotopyType{FgAbelianGroup::free(m.gp_lattice_rank())});
    EXPECT_TRUE(equivalent_up_to(torus, classifying_pro_space(mu_tower(m)), 60).equivalent);
    const auto wrong = profinite_type(K1HomotopyType{FgAbelianGroup::free(m.gp_lattice_rank() + 1)});
    EXPECT_FALSE(equivalent_up_to(wrong, classifying_pro_space(mu_tower(m)), 60).equivalent);
  }
}

}  // namespace
}  // namespace kato
