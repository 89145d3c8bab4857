#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kato/abgrp.hpp"

namespace kato {

using IntVector = std::vector<mpz_class>;

/// Binomial relation sum_j lhs_j p_j == sum_j rhs_j p_j among the generators.
struct Relation {
  std::vector<std::int64_t> lhs;
  std::vector<std::int64_t> rhs;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Toric input data: generators in Z^ambient_rank and, optionally, the
/// relations presenting the monoid they generate.
struct MonoidSpec {
  std::size_t ambient_rank = 0;
  std::vector<IntVector> generators;
  std::optional<std::vector<Relation>> relations;
};

struct ValidationOptions {
  /// Bound on the l1 norm of lattice points tested for saturation and on
  /// the degree of generator words tested for relation completeness.
  std::size_t degree_bound = 20;
};

/// A face of the monoid, recorded by the generators it contains.
struct Face {
  std::vector<std::size_t> support;  // sorted, 0-based generator indices
  std::vector<mpq_class> certificate;

  bool contains(std::size_t generator) const;
  /// Supports of `*this` are contained in those of `other`.
  bool is_subface_of(const Face& other) const;
};

/// Fine, saturated, sharp monoid generated by integer vectors. Only
/// produced by validate(), so every instance has passed its checks.
class AffineMonoid {
 public:
  const MonoidSpec& spec() const { return spec_; }
  std::size_t generator_count() const { return spec_.generators.size(); }
  std::size_t ambient_rank() const { return spec_.ambient_rank; }
  const std::vector<Relation>& relations() const { return *spec_.relations; }
  bool relations_synthesized() const { return relations_synthesized_; }

  std::size_t gp_lattice_rank() const { return gp_rank_; }
  bool is_sharp() const { return true; }
  /// Saturation is verified for lattice points of l1 norm <= degree_bound().
  bool is_saturated() const { return true; }
  std::size_t degree_bound() const { return degree_bound_; }

  /// d x k matrix whose columns are the generators.
  const IntMatrix& generator_matrix() const { return generator_matrix_; }
  /// r x k coordinates of the generators in a basis of the lattice they span.
  const IntMatrix& lattice_coordinates() const { return lattice_coordinates_; }
  /// Integer functional strictly positive on every generator.
  const IntVector& grading() const { return grading_; }
  /// Complete face lattice, sorted by (support size, support).
  const std::vector<Face>& faces() const { return faces_; }

  /// Whether x in Z^d is a nonnegative integer combination of generators.
  bool contains(const IntVector& x) const;

 private:
  friend AffineMonoid validate(MonoidSpec spec, const ValidationOptions& options);

  MonoidSpec spec_;
  bool relations_synthesized_ = false;
  std::size_t gp_rank_ = 0;
  std::size_t degree_bound_ = 20;
  IntMatrix generator_matrix_;
  IntMatrix lattice_coordinates_;
  IntVector grading_;
  std::vector<Face> faces_;
};

/// Checks sharpness, relation consistency and completeness, and saturation;
/// synthesizes relations from the lattice kernel when none are supplied.
/// Throws Error with kind NotSharp, RelationInconsistent, RelationsIncomplete,
/// SaturationFailure or InvalidArgument.
AffineMonoid validate(MonoidSpec spec, const ValidationOptions& options = {});

const std::vector<Face>& faces(const AffineMonoid& m);

/// The face with this support; throws NotAFace if there is none.
Face face_with_support(const AffineMonoid& m, std::vector<std::size_t> support);

/// Rank of the lattice spanned by the generators of the face.
std::size_t face_lattice_rank(const AffineMonoid& m, const Face& f);

struct Stalk {
  AffineMonoid quotient;
  std::size_t rank = 0;
};

/// P / <F>, presented on its indecomposable generators inside the free
/// group lattice of the quotient.
Stalk stalk(const AffineMonoid& m, const Face& f);

struct KummerExtension {
  AffineMonoid extended;
  /// P^gp -> (1/n)P^gp in lattice coordinates (n times the identity).
  IntMatrix inclusion_matrix;
};

KummerExtension kummer(const AffineMonoid& m, std::uint64_t n);

/// mu_n(P), reported as the cokernel C_n of P^gp -> (1/n)P^gp.
FgAbelianGroup mu(const AffineMonoid& m, std::uint64_t n);

std::string support_to_string(const std::vector<std::size_t>& support);

}  // namespace kato
