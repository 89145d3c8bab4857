#include <gtest/gtest.h>

#include "kato/strata.hpp"
#include "support.hpp"

namespace kato {
namespace {

using test::expect_kind;
using test::spec_of;

std::vector<std::size_t> ranks(const StratumTable& t) {
  std::vector<std::size_t> out;
  for (const auto& e : t.entries) out.push_back(e.stalk_rank);
  return out;
}

TEST(Stratify, Examples) {
  const StratumTable n1 = stratify(validate(spec_of(1, {{1}})));
  EXPECT_EQ(ranks(n1), (std::vector<std::size_t>{1, 0}));
  const StratumTable n2 = stratify(validate(spec_of(2, {{1, 0}, {0, 1}})));
  EXPECT_EQ(ranks(n2), (std::vector<std::size_t>{2, 1, 1, 0}));
  EXPECT_TRUE(n2.vertex().face.support.empty());
  const StratumTable cone = stratify(validate(spec_of(2, {{1, 0}, {1, 1}, {1, 2}})));
  EXPECT_EQ(ranks(cone), (std::vector<std::size_t>{2, 1, 1, 0}));
  EXPECT_EQ(cone.max_rank, 2u);
  EXPECT_EQ(cone.at_least(1).size(), 3u);
  EXPECT_EQ(cone.at_least(2).size(), 1u);
  EXPECT_EQ(cone.at_least(3).size(), 0u);
}

TEST(Stratify, LawsOnCorpusAndExtras) {
  std::vector<AffineMonoid> monoids;
  for (const auto& file : test::corpus_files()) monoids.push_back(test::corpus_monoid(file));
  monoids.push_back(validate(spec_of(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
  monoids.push_back(validate(spec_of(3, {{1, 1, 1}, {-1, 1, 1}, {-1, -1, 1}, {1, -1, 1}})));
  for (const auto& m : monoids) {
    const StratumTable t = stratify(m);
    EXPECT_EQ(t.entries.size(), faces(m).size());
    std::size_t at_max = 0;
    for (const auto& e : t.entries)
      if (e.stalk_rank == t.max_rank) {
        ++at_max;
        EXPECT_TRUE(e.face.support.empty());
      }
    EXPECT_EQ(at_max, 1u);
    EXPECT_EQ(t.max_rank, m.gp_lattice_rank());
    for (const auto& a : t.entries)
      for (const auto& b : t.entries)
        if (a.face.is_subface_of(b.face)) EXPECT_LE(b.stalk_rank, a.stalk_rank);
  }
}

TEST(StratumOfPoint, Examples) {
  const AffineMonoid n1 = validate(spec_of(1, {{1}}));
  EXPECT_TRUE(stratum_of_point(n1, CxPoint::floating({0.0})).support.empty());
  const AffineMonoid n2 = validate(spec_of(2, {{1, 0}, {0, 1}}));
  const Face f = stratum_of_point(n2, CxPoint::floating({3.0, 0.0}));
  EXPECT_EQ(f.support, (std::vector<std::size_t>{0}));
  EXPECT_EQ(stratify(n2).entry(f).stalk_rank, 1u);
  EXPECT_EQ(stratum_of_point(n2, CxPoint::floating({2.0, 5.0})).support, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(stratum_of_point(n2, CxPoint::floating({1e-12, 0.0})).support.empty());
  const AffineMonoid cone = validate(spec_of(2, {{1, 0}, {1, 1}, {1, 2}}));
  expect_kind([&] { stratum_of_point(cone, CxPoint::floating({1.0, 2.0, 5.0})); }, ErrorKind::NotOnVariety);
}

TEST(StratumOfPoint, ZeroingComplementRecoversFace) {
  // Pyramid over a square: faces include rays, 2-dim walls, and the apex.
  const AffineMonoid m = validate(spec_of(3, {{1, 1, 1}, {-1, 1, 1}, {-1, -1, 1}, {1, -1, 1}}));
  const StratumTable t = stratify(m);
  EXPECT_EQ(t.entries.size(), 10u);
  for (const auto& e : t.entries) {
    const auto pts = sample_stratum(m, e.face, 3, 11);
    for (const auto& p : pts) EXPECT_EQ(stratum_of_point(m, p).support, e.face.support);
  }
}

}  // namespace
}  // namespace kato
