#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kato/abgrp.hpp"
#include "kato/monoid.hpp"

namespace kato {

using Level = std::uint64_t;

/// Tower of finite abelian groups indexed by the positive integers ordered
/// by divisibility, with a transition level(m) -> level(n) whenever n | m.
///
/// Levels are computed on demand from pure functions; nothing is cached, so
/// a system can be shared freely between threads.
class FiniteAbelianProSystem {
 public:
  using LevelFn = std::function<CyclicSum(Level)>;
  /// Matrix of the transition level(from) -> level(to), for to | from.
  using TransitionFn = std::function<IntMatrix(Level from, Level to)>;

  FiniteAbelianProSystem(std::string description, LevelFn level, TransitionFn transition);

  const std::string& description() const { return description_; }
  CyclicSum presentation(Level n) const;
  FgAbelianGroup level(Level n) const { return presentation(n).normal_form(); }
  GroupMap transition(Level from, Level to) const;

 private:
  std::string description_;
  LevelFn level_;
  TransitionFn transition_;
};

/// Levels G/mG with the reduction maps.
FiniteAbelianProSystem completion(const FgAbelianGroup& g);

/// Level-wise direct sum.
FiniteAbelianProSystem product(const std::vector<FiniteAbelianProSystem>& factors);

/// n -> mu_n(P) with the natural surjections.
FiniteAbelianProSystem mu_tower(const AffineMonoid& m);

struct CoherenceReport {
  bool coherent = true;
  std::string failure;
};

/// Checks, for all n | m | k <= bound, that transitions are well defined and
/// surjective, compose, and agree with tensor_mod on normal forms.
CoherenceReport check_coherence(const FiniteAbelianProSystem& s, Level bound);

struct LevelRecord {
  Level n = 0;
  FgAbelianGroup a;
  FgAbelianGroup b;
};

struct EquivalenceCertificate {
  bool equivalent = true;
  std::vector<LevelRecord> levels;
  /// First level whose groups differ.
  std::optional<Level> witness_level;
  /// First transition (from, to) whose kernels differ or that fails to be onto.
  std::optional<std::pair<Level, Level>> witness_transition;
  std::string reason;
  std::string scope;
};

/// Level-wise comparison over 1..bound: isomorphic normal forms at every
/// level, and surjective transitions with isomorphic kernels for every
/// n | m <= bound.
EquivalenceCertificate equivalent_up_to(const FiniteAbelianProSystem& a,
                                        const FiniteAbelianProSystem& b, Level bound);

/// Same comparison restricted to an explicit index set.
EquivalenceCertificate equivalent_on(const FiniteAbelianProSystem& a,
                                     const FiniteAbelianProSystem& b,
                                     const std::vector<Level>& indices);

/// K(pi1, 1) for an abelian pi1.
struct K1HomotopyType {
  FgAbelianGroup pi1;

  friend bool operator==(const K1HomotopyType&, const K1HomotopyType&) = default;
};

/// Pro-space n -> B(level(n)); the tower of groups is kept as pi1 data.
class ClassifyingProSpace {
 public:
  explicit ClassifyingProSpace(FiniteAbelianProSystem groups) : groups_(std::move(groups)) {}

  const FiniteAbelianProSystem& fundamental_groups() const { return groups_; }
  K1HomotopyType level(Level n) const { return {groups_.level(n)}; }
  GroupMap transition_on_pi1(Level from, Level to) const { return groups_.transition(from, to); }

 private:
  FiniteAbelianProSystem groups_;
};

ClassifyingProSpace classifying_pro_space(const FiniteAbelianProSystem& s);

/// Profinite completion of K(A, 1) as B of the completed group.
ClassifyingProSpace profinite_type(const K1HomotopyType& t);

EquivalenceCertificate equivalent_up_to(const ClassifyingProSpace& a,
                                        const ClassifyingProSpace& b, Level bound);

}  // namespace kato
