#pragma once

// Elements (g, phi) of G x| Aut(G) for G = GL_N, with phi inner or outer.

#include <string>
#include <vector>

#include "twild/linalg.hpp"

namespace twild {

/// Normal form g -> A g A^-1 (inner) or g -> A g^-T A^-1 (outer).  The
/// identity is inner(1).  Any composite reduces to one of the two forms.
class Automorphism {
 public:
  static Automorphism identity(Eigen::Index n);
  static Automorphism inner(Mat a);
  static Automorphism outer(Mat a);
  /// phi_1 o phi_2 o ... ; throws on an empty list.
  static Automorphism composite(const std::vector<Automorphism>& parts);

  Eigen::Index size() const { return a_.rows(); }
  bool is_outer() const { return outer_; }
  const Mat& matrix() const { return a_; }

  Mat apply(const Mat& g) const;
  /// Differential on the Lie algebra.
  Mat apply_lie(const Mat& x) const;
  Automorphism inverse() const;
  /// Equal as maps: same kind and proportional matrices.
  bool same_as(const Automorphism& other, double tol = 1e-10) const;
  std::string describe() const;

  /// (a o b)(g) = a(b(g)).
  friend Automorphism operator*(const Automorphism& a, const Automorphism& b);

 private:
  Automorphism(Mat a, bool outer) : a_(std::move(a)), outer_(outer) {}
  Mat a_;
  bool outer_ = false;
};

struct TwistedElement {
  Mat g;
  Automorphism phi;

  Eigen::Index size() const { return g.rows(); }
  /// Ad_(g,phi) X = g dphi(X) g^-1.
  Mat adjoint(const Mat& x) const { return g * phi.apply_lie(x) * g.inverse(); }
  Mat adjoint_inverse(const Mat& x) const { return phi.inverse().apply_lie(g.inverse() * x * g); }
};

/// (g1 phi1(g2), phi1 phi2); throws std::invalid_argument on a size mismatch.
TwistedElement compose(const TwistedElement& a, const TwistedElement& b);
TwistedElement inverse(const TwistedElement& x);
TwistedElement power(const TwistedElement& x, int r);
/// (h g phi(h)^-1, phi).
TwistedElement twisted_conjugate(const Mat& h, const TwistedElement& x);

/// True iff M P^-1 is supported on the Levi mask (to tol relative to |M|) and invertible.
bool in_twist_coset(const Mat& m, const Mask& levi, const Mat& p, double tol = 1e-10);

}  // namespace twild
