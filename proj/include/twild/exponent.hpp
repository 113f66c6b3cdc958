#pragma once

// Ramified exponents q = sum_e a_e z^(-e), their Galois orbits, and the
// points of maximal decay ("apples") of the circles they define.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twild/cyclotomic.hpp"
#include "twild/rational.hpp"

namespace twild {

/// Coefficients closer than this are identified in numeric mode.
inline constexpr double kNumericTolerance = 1e-9;

enum class Mode { Exact, Numeric };

std::string to_string(Mode m);

/// Either an exact cyclotomic number or a numeric complex value.
class Coefficient {
 public:
  Coefficient() : value_(Cyclo()) {}
  Coefficient(Cyclo c) : value_(std::move(c)) {}  // NOLINT: implicit by intent
  explicit Coefficient(std::complex<double> z) : value_(z) {}
  static Coefficient integer(std::int64_t n) { return Coefficient(Cyclo(Rational(n))); }

  Mode mode() const { return std::holds_alternative<Cyclo>(value_) ? Mode::Exact : Mode::Numeric; }
  const Cyclo& exact() const { return std::get<Cyclo>(value_); }
  std::complex<double> to_complex() const;
  bool is_zero() const;

  /// arg(a)/(2 pi) in [0,1); exact when the argument is a rational multiple of pi.
  std::pair<double, std::optional<Rational>> argument_turns() const;

  Coefficient operator-() const;
  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  /// Exact comparison when both are exact, else within kNumericTolerance.
  friend bool operator==(const Coefficient& a, const Coefficient& b);

 private:
  std::variant<Cyclo, std::complex<double>> value_;
};

using RawTerm = std::pair<Rational, Coefficient>;

/// Canonical exponent: positive exponents e (coefficient of z^-e), nonzero
/// coefficients, iterated in descending order of e.
class Exponent {
 public:
  using Terms = std::map<Rational, Coefficient, std::greater<>>;

  Exponent() = default;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Mode mode() const;

  /// Leading (largest exponent) term; requires !is_zero().
  const std::pair<const Rational, Coefficient>& leading() const { return *terms_.begin(); }

  /// Value at z = |z| e^{i theta} using z^(-e) = |z|^(-e) e^{-i e theta}
  /// (theta taken literally, so theta beyond 2 pi continues onto other sheets).
  std::complex<double> evaluate(double modulus, double theta) const;

  /// q(w^r) as an exponent in w.
  Exponent pullback(std::int64_t r) const;

  friend bool operator==(const Exponent& a, const Exponent& b);
  friend Exponent operator-(const Exponent& a);

 private:
  friend Exponent normalize(const std::vector<RawTerm>& raw);
  Terms terms_;
};

/// Combines like terms, drops zero coefficients; throws std::invalid_argument
/// on a nonzero coefficient at a nonpositive exponent.
Exponent normalize(const std::vector<RawTerm>& raw);

/// Minimal r with q in C[z^(-1/r)]; 1 for q = 0.
std::int64_t ramification(const Exponent& q);

struct DegreeLevel {
  std::int64_t degree = 0;
  Rational level{0};
};
DegreeLevel degree_level(const Exponent& q);

/// The ram(q) branches in monodromy order: branch j carries coefficient
/// a_e * zeta_r^(-e r j), i.e. continuation of q j times around positively.
std::vector<Exponent> galois_orbit(const Exponent& q);

bool same_circle(const Exponent& a, const Exponent& b);

Exponent difference(const Exponent& a, const Exponent& b);

/// A covering circle <q> of the boundary circle.
class CircleClass {
 public:
  explicit CircleClass(Exponent representative);

  const Exponent& representative() const { return rep_; }
  std::int64_t ram() const { return ram_; }
  std::int64_t deg() const { return deg_; }
  const Rational& level() const { return level_; }
  Mode mode() const { return rep_.mode(); }

 private:
  Exponent rep_;
  std::int64_t ram_;
  std::int64_t deg_;
  Rational level_;
};

/// A direction on the boundary circle, in turns (fractions of 2 pi).
struct Direction {
  double turns = 0.0;              // in [0,1) on the base circle
  std::optional<Rational> exact;   // set when the angle is a rational number of turns
  std::int64_t sheet = 0;          // sheet of the covering circle (apples only)

  double radians() const;
  /// Exact comparison when both are exact, otherwise within 1e-9 radians.
  bool same_angle(const Direction& other) const;
  bool before(const Direction& other) const;
};

/// Apples of <q>: the deg(q) points of the covering circle where the leading
/// term a z^(-k/r) is real and negative.  Throws on the zero circle.
std::vector<Direction> apples(const CircleClass& circle);

/// Apples of the function q (fixed branch at angle 0) met while its angle
/// sweeps the base interval [0, 1) turns.
std::vector<Direction> apples_on_base_turn(const Exponent& q);

std::string to_string(const Exponent& q);

}  // namespace twild
