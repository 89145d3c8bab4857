#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kato/monoid.hpp"

namespace kato {

inline constexpr double kDefaultTolerance = 1e-9;

/// Element of Q(i).
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;
  /// Integer power; negative exponents need a nonzero base.
  GaussianRational pow(std::int64_t e) const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  double abs() const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  mpq_class re_ = 0;
  mpq_class im_ = 0;
};

/// Nonnegative real base^(1/index) with rational base.
struct Radical {
  mpq_class base = 1;
  std::uint64_t index = 1;

  double to_double() const;
  Radical root(std::uint64_t n) const { return {base, index * n}; }
  bool is_zero() const { return base == 0; }
};

bool operator==(const Radical& a, const Radical& b);

/// Angle in turns, normalized into [0, 1).
mpq_class normalize_turns(mpq_class turns);

struct ExactKnCoordinate {
  Radical radius;
  mpq_class turns;
};

struct FloatKnCoordinate {
  double radius = 0.0;
  std::complex<double> phase{1.0, 0.0};
};

/// Point of C(P) = Hom(P, C) by its generator values.
class CxPoint {
 public:
  static CxPoint exact(std::vector<GaussianRational> values);
  static CxPoint floating(std::vector<std::complex<double>> values);

  bool is_exact() const { return exact_; }
  std::size_t size() const { return values_.size(); }
  /// Floating values; approximations of the exact values for exact points.
  const std::vector<std::complex<double>>& values() const { return values_; }
  const std::vector<GaussianRational>& exact_values() const { return exact_values_; }

 private:
  bool exact_ = false;
  std::vector<std::complex<double>> values_;
  std::vector<GaussianRational> exact_values_;
};

/// Point of C(P)_log = Hom(P, R>=0 x S^1) by its generator values.
class KnPoint {
 public:
  static KnPoint exact(std::vector<ExactKnCoordinate> values);
  static KnPoint floating(std::vector<FloatKnCoordinate> values);

  bool is_exact() const { return exact_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<FloatKnCoordinate>& values() const { return values_; }
  const std::vector<ExactKnCoordinate>& exact_values() const { return exact_values_; }
  /// The same point with exactness dropped.
  KnPoint to_floating() const { return floating(values_); }

 private:
  bool exact_ = false;
  std::vector<FloatKnCoordinate> values_;
  std::vector<ExactKnCoordinate> exact_values_;
};

enum class Target { ComplexPoints, KnPoints };

/// prod_j z_j^lhs_j == prod_j z_j^rhs_j, one equation per relation. For
/// KnPoints radii multiply and angles add modulo 1.
struct BinomialSystem {
  std::size_t variable_count = 0;
  std::vector<Relation> equations;
  Target target = Target::ComplexPoints;
};

BinomialSystem emit_equations(const AffineMonoid& m, Target target);

struct MembershipResult {
  bool member = true;
  double max_residual = 0.0;
  /// Equation attaining the maximum residual, if any equation exists.
  std::optional<std::size_t> worst_equation;
};

/// Exact points are members only with zero residual; floating points need
/// every residual <= tol. Throws ArityMismatch on a size mismatch.
MembershipResult check_membership(const BinomialSystem& sys, const CxPoint& p,
                                  double tol = kDefaultTolerance);
MembershipResult check_membership(const BinomialSystem& sys, const KnPoint& p,
                                  double tol = kDefaultTolerance);

/// (r, a) -> r * a coordinatewise. Exact when every value lands in Q(i).
CxPoint tau(const KnPoint& p);

/// Polar lift (|z|, z/|z|) of a point; the angle is 0 where z vanishes.
KnPoint polar_lift(const CxPoint& p);

/// Exact points of the stratum of `f`: coordinates outside the face vanish,
/// the others are values of a random character of the face lattice.
std::vector<CxPoint> sample_stratum(const AffineMonoid& m, const Face& f, std::size_t count,
                                    std::uint64_t seed);

/// Exact Kato-Nakayama points lying over the stratum of `f`, with rational
/// radii and rational angles.
std::vector<KnPoint> sample_kn_stratum(const AffineMonoid& m, const Face& f, std::size_t count,
                                       std::uint64_t seed);

}  // namespace kato
