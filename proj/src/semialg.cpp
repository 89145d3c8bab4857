#include "kato/semialg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <random>

#include "kato/error.hpp"

namespace kato {

namespace {

mpq_class pow_q(const mpq_class& q, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

unsigned long checked_exponent(std::int64_t e) {
  if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in equation");
  return static_cast<unsigned long>(e);
}

std::complex<double> ipow(std::complex<double> z, unsigned long e) {
  std::complex<double> acc(1.0);
  while (e) {
    if (e & 1) acc *= z;
    z *= z;
    e >>= 1;
  }
  return acc;
}

std::complex<double> unit_phase(const mpq_class& turns) {
  const double angle = 2.0 * std::numbers::pi * turns.get_d();
  return {std::cos(angle), std::sin(angle)};
}

double angle_residual(const mpq_class& delta_turns) {
  mpq_class frac = normalize_turns(delta_turns);
  if (frac > mpq_class(1, 2)) frac = 1 - frac;
  return 2.0 * std::sin(std::numbers::pi * frac.get_d());
}

void require_arity(const BinomialSystem& sys, std::size_t size) {
  if (size != sys.variable_count) {
    throw Error(ErrorKind::ArityMismatch, "point has " + std::to_string(size) +
                                              " coordinates, system has " +
                                              std::to_string(sys.variable_count) + " variables");
  }
}

void record(MembershipResult& out, std::size_t eq, double residual, bool holds) {
  if (!out.worst_equation || residual > out.max_residual) {
    out.max_residual = residual;
    out.worst_equation = eq;
  }
  if (!holds) out.member = false;
}

// Deterministic draws straight from the engine so fixtures do not depend on
// the standard library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  long between(long lo, long hi) {
    return lo + static_cast<long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

// Coordinates of the face generators in a basis of the lattice they span.
IntMatrix face_basis_coordinates(const AffineMonoid& m, const Face& f) {
  const IntMatrix& coords = m.lattice_coordinates();
  IntMatrix fc(coords.rows(), f.support.size());
  for (std::size_t c = 0; c < f.support.size(); ++c)
    for (std::size_t i = 0; i < coords.rows(); ++i) fc(i, c) = coords(i, f.support[c]);
  const SmithForm snf = smith_normal_form(fc);
  const IntMatrix ufc = snf.U * fc;
  IntMatrix out(snf.rank, f.support.size());
  for (std::size_t i = 0; i < snf.rank; ++i)
    for (std::size_t c = 0; c < f.support.size(); ++c) {
      if (ufc(i, c) % snf.D(i, i) != 0) {
        throw Error(ErrorKind::SaturationFailure, "face lattice is not saturated");
      }
      out(i, c) = ufc(i, c) / snf.D(i, i);
    }
  return out;
}

std::int64_t small_exponent(const mpz_class& v) {
  if (!v.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "lattice coordinate too large");
  return v.get_si();
}

Face checked_face(const AffineMonoid& m, const Face& f) {
  return face_with_support(m, f.support);
}

constexpr int kRetryBudget = 100;

}  // namespace

// ---------------------------------------------------------------------------

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "inverse of zero");
  const mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational GaussianRational::pow(std::int64_t e) const {
  GaussianRational base = e < 0 ? inverse() : *this;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  GaussianRational acc(1);
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

double GaussianRational::abs() const { return std::sqrt(norm().get_d()); }

double Radical::to_double() const {
  if (index == 1) return base.get_d();
  return std::pow(base.get_d(), 1.0 / static_cast<double>(index));
}

bool operator==(const Radical& a, const Radical& b) {
  return pow_q(a.base, b.index) == pow_q(b.base, a.index);
}

mpq_class normalize_turns(mpq_class turns) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), turns.get_num_mpz_t(), turns.get_den_mpz_t());
  turns -= fl;
  turns.canonicalize();
  return turns;
}

CxPoint CxPoint::exact(std::vector<GaussianRational> values) {
  CxPoint p;
  p.exact_ = true;
  for (const auto& v : values) p.values_.push_back(v.to_complex());
  p.exact_values_ = std::move(values);
  return p;
}

CxPoint CxPoint::floating(std::vector<std::complex<double>> values) {
  CxPoint p;
  p.values_ = std::move(values);
  return p;
}

KnPoint KnPoint::exact(std::vector<ExactKnCoordinate> values) {
  KnPoint p;
  p.exact_ = true;
  for (auto& v : values) {
    if (v.radius.base < 0 || v.radius.index == 0) {
      throw Error(ErrorKind::InvalidPoint, "radius must be a nonnegative real");
    }
    v.turns = normalize_turns(v.turns);
    p.values_.push_back({v.radius.to_double(), unit_phase(v.turns)});
  }
  p.exact_values_ = std::move(values);
  return p;
}

KnPoint KnPoint::floating(std::vector<FloatKnCoordinate> values) {
  for (const auto& v : values) {
    if (!(v.radius >= 0.0)) throw Error(ErrorKind::InvalidPoint, "radius must be a nonnegative real");
  }
  KnPoint p;
  p.values_ = std::move(values);
  return p;
}

// ---------------------------------------------------------------------------

BinomialSystem emit_equations(const AffineMonoid& m, Target target) {
  return BinomialSystem{m.generator_count(), m.relations(), target};
}

MembershipResult check_membership(const BinomialSystem& sys, const CxPoint& p, double tol) {
  if (sys.target != Target::ComplexPoints) {
    throw Error(ErrorKind::InvalidArgument, "complex point checked against a Kato-Nakayama system");
  }
  require_arity(sys, p.size());
  MembershipResult out;
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    const Relation& rel = sys.equations[e];
    if (p.is_exact()) {
      GaussianRational lhs(1), rhs(1);
      for (std::size_t j = 0; j < p.size(); ++j) {
        lhs = lhs * p.exact_values()[j].pow(static_cast<std::int64_t>(checked_exponent(rel.lhs[j])));
        rhs = rhs * p.exact_values()[j].pow(static_cast<std::int64_t>(checked_exponent(rel.rhs[j])));
      }
      const GaussianRational diff = lhs - rhs;
      double residual = diff.abs();
      if (!diff.is_zero() && residual == 0.0) residual = std::numeric_limits<double>::denorm_min();
      record(out, e, residual, diff.is_zero());
    } else {
      std::complex<double> lhs(1.0), rhs(1.0);
      for (std::size_t j = 0; j < p.size(); ++j) {
        lhs *= ipow(p.values()[j], checked_exponent(rel.lhs[j]));
        rhs *= ipow(p.values()[j], checked_exponent(rel.rhs[j]));
      }
      const double residual = std::abs(lhs - rhs);
      record(out, e, residual, residual <= tol);
    }
  }
  return out;
}

MembershipResult check_membership(const BinomialSystem& sys, const KnPoint& p, double tol) {
  if (sys.target != Target::KnPoints) {
    throw Error(ErrorKind::InvalidArgument, "Kato-Nakayama point checked against a complex system");
  }
  require_arity(sys, p.size());
  MembershipResult out;
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    const Relation& rel = sys.equations[e];
    double radius_lhs = 1.0, radius_rhs = 1.0;
    std::complex<double> phase_lhs(1.0), phase_rhs(1.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto& v = p.values()[j];
      const unsigned long a = checked_exponent(rel.lhs[j]);
      const unsigned long b = checked_exponent(rel.rhs[j]);
      radius_lhs *= ipow(v.radius, a).real();
      radius_rhs *= ipow(v.radius, b).real();
      phase_lhs *= ipow(v.phase, a);
      phase_rhs *= ipow(v.phase, b);
    }
    if (p.is_exact()) {
      std::uint64_t common = 1;
      mpq_class delta = 0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const auto& v = p.exact_values()[j];
        if (rel.lhs[j] != 0 || rel.rhs[j] != 0) common = std::lcm(common, v.radius.index);
        delta += mpq_class(static_cast<long>(rel.lhs[j] - rel.rhs[j])) * v.turns;
      }
      mpq_class lhs_power = 1, rhs_power = 1;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const auto& v = p.exact_values()[j];
        const unsigned long scale = common / v.radius.index;
        if (rel.lhs[j]) lhs_power *= pow_q(v.radius.base, checked_exponent(rel.lhs[j]) * scale);
        if (rel.rhs[j]) rhs_power *= pow_q(v.radius.base, checked_exponent(rel.rhs[j]) * scale);
      }
      const bool holds = lhs_power == rhs_power && normalize_turns(delta) == 0;
      double residual = std::max(std::abs(radius_lhs - radius_rhs), angle_residual(delta));
      if (!holds && residual == 0.0) residual = std::numeric_limits<double>::denorm_min();
      if (holds) residual = 0.0;
      record(out, e, residual, holds);
    } else {
      const double residual =
          std::max(std::abs(radius_lhs - radius_rhs), std::abs(phase_lhs - phase_rhs));
      record(out, e, residual, residual <= tol);
    }
  }
  return out;
}

CxPoint tau(const KnPoint& p) {
  if (p.is_exact()) {
    std::vector<GaussianRational> values;
    bool representable = true;
    for (const auto& v : p.exact_values()) {
      if (v.radius.is_zero()) {
        values.emplace_back(0);
        continue;
      }
      const mpq_class quarters = v.turns * 4;
      if (v.radius.index != 1 || quarters.get_den() != 1) {
        representable = false;
        break;
      }
      static const GaussianRational kQuarterTurns[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      values.push_back(GaussianRational(v.radius.base) *
                       kQuarterTurns[quarters.get_num().get_ui() % 4]);
    }
    if (representable) return CxPoint::exact(std::move(values));
  }
  std::vector<std::complex<double>> values;
  for (const auto& v : p.values()) values.push_back(v.radius * v.phase);
  return CxPoint::floating(std::move(values));
}

KnPoint polar_lift(const CxPoint& p) {
  std::vector<FloatKnCoordinate> values;
  for (const auto& z : p.values()) {
    const double r = std::abs(z);
    values.push_back({r, r == 0.0 ? std::complex<double>(1.0) : z / r});
  }
  return KnPoint::floating(std::move(values));
}

std::vector<CxPoint> sample_stratum(const AffineMonoid& m, const Face& face, std::size_t count,
                                    std::uint64_t seed) {
  const Face f = checked_face(m, face);
  const IntMatrix coords = face_basis_coordinates(m, f);
  const BinomialSystem sys = emit_equations(m, Target::ComplexPoints);
  Draw draw(seed);
  std::vector<CxPoint> out;
  int failures = 0;
  while (out.size() < count) {
    std::vector<GaussianRational> character;
    for (std::size_t i = 0; i < coords.rows(); ++i) {
      long re = 0, im = 0;
      while (re == 0 && im == 0) {
        re = draw.between(-3, 3);
        im = draw.between(-3, 3);
      }
      const long den = draw.between(1, 3);
      mpq_class a(re, den), b(im, den);
      a.canonicalize();
      b.canonicalize();
      character.emplace_back(a, b);
    }
    std::vector<GaussianRational> values(m.generator_count(), GaussianRational(0));
    for (std::size_t c = 0; c < f.support.size(); ++c) {
      GaussianRational z(1);
      for (std::size_t i = 0; i < coords.rows(); ++i)
        z = z * character[i].pow(small_exponent(coords(i, c)));
      values[f.support[c]] = z;
    }
    CxPoint p = CxPoint::exact(std::move(values));
    bool ok = check_membership(sys, p).member;
    for (std::size_t j = 0; j < p.size() && ok; ++j)
      ok = p.exact_values()[j].is_zero() != f.contains(j);
    if (ok) {
      out.push_back(std::move(p));
    } else if (++failures > kRetryBudget) {
      throw Error(ErrorKind::StratumEmptyAtDeskScale,
                  "no consistent point found on stratum " + support_to_string(f.support));
    }
  }
  return out;
}

std::vector<KnPoint> sample_kn_stratum(const AffineMonoid& m, const Face& face, std::size_t count,
                                       std::uint64_t seed) {
  const Face f = checked_face(m, face);
  const IntMatrix face_coords = face_basis_coordinates(m, f);
  const IntMatrix& coords = m.lattice_coordinates();
  const BinomialSystem sys = emit_equations(m, Target::KnPoints);
  Draw draw(seed);
  std::vector<KnPoint> out;
  int failures = 0;
  while (out.size() < count) {
    std::vector<mpq_class> scale;
    for (std::size_t i = 0; i < face_coords.rows(); ++i) {
      mpq_class a(draw.between(1, 4), draw.between(1, 4));
      a.canonicalize();
      scale.push_back(a);
    }
    std::vector<mpq_class> angle;
    for (std::size_t i = 0; i < coords.rows(); ++i) {
      const long den = draw.between(1, 12);
      mpq_class t(draw.between(0, den - 1), den);
      t.canonicalize();
      angle.push_back(t);
    }
    std::vector<ExactKnCoordinate> values(m.generator_count());
    for (std::size_t j = 0; j < m.generator_count(); ++j) {
      mpq_class turns = 0;
      for (std::size_t i = 0; i < coords.rows(); ++i) turns += angle[i] * coords(i, j);
      values[j] = {Radical{0, 1}, turns};
    }
    for (std::size_t c = 0; c < f.support.size(); ++c) {
      GaussianRational rho(1);
      for (std::size_t i = 0; i < face_coords.rows(); ++i)
        rho = rho * GaussianRational(scale[i]).pow(small_exponent(face_coords(i, c)));
      values[f.support[c]].radius = Radical{rho.re(), 1};
    }
    KnPoint p = KnPoint::exact(std::move(values));
    bool ok = check_membership(sys, p).member;
    for (std::size_t j = 0; j < p.size() && ok; ++j)
      ok = p.exact_values()[j].radius.is_zero() != f.contains(j);
    if (ok) {
      out.push_back(std::move(p));
    } else if (++failures > kRetryBudget) {
      throw Error(ErrorKind::StratumEmptyAtDeskScale,
                  "no consistent point found on stratum " + support_to_string(f.support));
    }
  }
  return out;
}

}  // namespace kato
