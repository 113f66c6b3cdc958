#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m).
//
// An element is stored in the power basis 1, zeta, ..., zeta^(m-1), reduced
// modulo the m-th cyclotomic polynomial so that only the first phi(m)
// coordinates can be nonzero.  Elements of different orders are compared and
// combined after lifting both to the field of order lcm(m1, m2).

#include <complex>
#include <optional>
#include <cstdint>
#include <vector>

#include "twild/rational.hpp"

namespace twild {

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t m);

std::int64_t euler_phi(std::int64_t m);

class Cyclo {
 public:
  /// Zero of Q(zeta_1) = Q.
  Cyclo();
  /// The rational q embedded in Q(zeta_m).
  explicit Cyclo(Rational q, std::int64_t order = 1);
  /// Power-basis coordinates; reduced on construction. coords.size() <= order.
  Cyclo(std::int64_t order, std::vector<Rational> coords);

  /// zeta_m^k.
  static Cyclo root_of_unity(std::int64_t m, std::int64_t k);

  std::int64_t order() const { return order_; }
  /// Length == order(); entries past phi(order()) are zero.
  const std::vector<Rational>& coords() const { return coords_; }

  /// Same element viewed in Q(zeta_M); M must be a multiple of order().
  Cyclo lifted(std::int64_t big_order) const;

  bool is_zero() const;
  /// Complex conjugate (zeta -> zeta^-1).
  Cyclo conj() const;
  bool is_real() const { return *this == conj(); }

  std::complex<double> to_complex() const;

  Cyclo operator-() const;
  friend Cyclo operator+(const Cyclo& a, const Cyclo& b);
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b);
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b);
  friend bool operator==(const Cyclo& a, const Cyclo& b);

 private:
  void reduce();

  std::int64_t order_ = 1;
  std::vector<Rational> coords_;
};

/// If arg(a) is a rational multiple of 2*pi, returns it in turns (in [0,1)).
/// Decided exactly: a root of unity a/|a| times a positive real.
std::optional<Rational> exact_argument_turns(const Cyclo& a);

}  // namespace twild
