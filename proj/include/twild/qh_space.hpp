#pragma once

// A twisted quasi-Hamiltonian space realized on a product of matrix
// manifolds, with numerical checks of its axioms.
//
// Points are tuples of matrices.  A tangent vector is a tuple of Lie algebra
// elements u_k, meaning the curve t -> exp(t u_k) X_k on every factor; the
// constant tuples are right-invariant vector fields, whose brackets are
// [U, V] = -([u_k, v_k])_k.

#include <complex>
#include <string>
#include <vector>

#include "twild/linalg.hpp"
#include "twild/twisted.hpp"

namespace twild {

using Point = std::vector<Mat>;
using Tangent = std::vector<Mat>;
using GroupElement = std::vector<Mat>;  // one matrix per group factor
using Cplx = std::complex<double>;

struct GroupFactor {
  std::string name;
  Mask lie;  // the Lie algebra is the span of the masked entries
};

class QHSpace {
 public:
  virtual ~QHSpace() = default;

  virtual std::string name() const = 0;
  virtual std::vector<Mask> tangent_masks() const = 0;
  /// One moment component per group factor, in the same order.
  virtual std::vector<GroupFactor> groups() const = 0;

  virtual Point sample(Rng& rng) const = 0;
  virtual Point act(const GroupElement& g, const Point& p) const = 0;
  /// d/dt act(exp(t X)) p at t = 0.
  virtual Tangent fundamental(const Point& p, const std::vector<Mat>& x) const = 0;
  /// Image of u under the differential of act(g).
  virtual Tangent push(const GroupElement& g, const Point& p, const Tangent& u) const = 0;

  virtual std::vector<TwistedElement> moment(const Point& p) const = 0;
  /// Left-trivialized derivative theta = dphi^-1(g^-1 dg) of each moment component along u.
  virtual std::vector<Mat> d_moment(const Point& p, const Tangent& u) const = 0;

  virtual Cplx omega(const Point& p, const Tangent& u, const Tangent& v) const = 0;

  /// d_moment moved by a twisted adjoint Ad_(g_a) per component, g_a depending
  /// only on p.  χ is invariant under this, so spaces whose left-trivialized
  /// derivative is badly scaled (fusions) return a better balanced frame.
  virtual std::vector<Mat> chi_frame(const Point& p, const Tangent& u) const { return d_moment(p, u); }

  // Derived helpers.
  std::size_t dimension() const;
  Point move(const Point& p, const Tangent& u, double t) const;
  Tangent random_tangent(Rng& rng) const;
  std::vector<Tangent> tangent_basis() const;
  GroupElement random_group_element(Rng& rng) const;
  std::vector<Mat> random_lie(Rng& rng) const;
};

/// Signs in dω = -s_chi μ*χ and ι(v_X)ω = s_mom ½ μ*(θ + θ̄, X); calibrated
/// once on the untwisted double and frozen here.
struct AxiomSigns {
  double chi;
  double moment;
};
extern const AxiomSigns kAxiomSigns;

/// χ(x, y, z) = ½ Σ_a tr(θ_a(x) [θ_a(y), θ_a(z)]), evaluated in chi_frame.
Cplx cartan_three_form(const QHSpace& m, const Point& p, const Tangent& x, const Tangent& y, const Tangent& z);

/// Exterior derivative of ω on three right-invariant fields.  Directional
/// derivatives use a 16-node Cauchy contour of radius h in complex t.
Cplx d_omega(const QHSpace& m, const Point& p, const Tangent& u, const Tangent& v, const Tangent& w, double h);

double qh1_residual(const QHSpace& m, const Point& p, const Tangent& u, const Tangent& v, const Tangent& w,
                    double h = 1e-3, const AxiomSigns& signs = kAxiomSigns);
double qh2_residual(const QHSpace& m, const Point& p, const std::vector<Mat>& x, const Tangent& u,
                    const AxiomSigns& signs = kAxiomSigns);

struct KernelReport {
  int dimension = 0;     // complex dimension of the space
  int rank_omega = 0;
  int rank_stacked = 0;  // rank of [ω; dμ]
  int kernel() const { return dimension - rank_stacked; }
};
/// Singular values below tol * (largest) count as zero.
KernelReport qh3_kernel(const QHSpace& m, const Point& p, double tol = 1e-8);

/// max_a |μ_a(g p) - g_a μ_a(p) φ_a(g_a)^-1| / max(1, |μ_a(p)|); infinite when a twist changes.
double equivariance_residual(const QHSpace& m, const Point& p, const GroupElement& g);
/// |ω(p; u, v) - ω(g p; g u, g v)| / max(1, |ω(p; u, v)|).
double invariance_residual(const QHSpace& m, const Point& p, const GroupElement& g, const Tangent& u,
                           const Tangent& v);

Tangent add(const Tangent& a, const Tangent& b, Cplx scale = 1.0);
Tangent bracket(const Tangent& a, const Tangent& b);  // the field bracket -[a, b]
double norm(const Tangent& u);

/// ⟨α ∧ β⟩(u, v) = tr(α(u) β(v)) - tr(α(v) β(u)).
inline Cplx wedge(const Mat& au, const Mat& bv, const Mat& av, const Mat& bu) {
  return (au * bv).trace() - (av * bu).trace();
}

}  // namespace twild
