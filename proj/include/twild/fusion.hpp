#pragma once

// Fusion of quasi-Hamiltonian spaces, twisted doubles, and assembly of the
// space of Stokes representations of a wild surface.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twild/fission.hpp"

namespace twild {

using SpacePtr = std::shared_ptr<const QHSpace>;

/// Sign of the correction ½⟨μ_i^*θ ∧ μ_j^*θ̄⟩ added to the fused two-form.
extern const double kFusionSign;

/// A point with one group factor and trivial moment.
class PointSpace : public QHSpace {
 public:
  explicit PointSpace(Eigen::Index n) : n_(n) {}
  std::string name() const override { return "point"; }
  std::vector<Mask> tangent_masks() const override { return {}; }
  std::vector<GroupFactor> groups() const override { return {{"G", Mask::Ones(n_, n_)}}; }
  Point sample(Rng&) const override { return {}; }
  Point act(const GroupElement&, const Point& p) const override { return p; }
  Tangent fundamental(const Point&, const std::vector<Mat>&) const override { return {}; }
  Tangent push(const GroupElement&, const Point&, const Tangent& u) const override { return u; }
  std::vector<TwistedElement> moment(const Point&) const override {
    return {{Mat::Identity(n_, n_), Automorphism::identity(n_)}};
  }
  std::vector<Mat> d_moment(const Point&, const Tangent&) const override { return {Mat::Zero(n_, n_)}; }
  Cplx omega(const Point&, const Tangent&, const Tangent&) const override { return 0; }

 private:
  Eigen::Index n_;
};

/// The double D = G x G, points (a, b), action (g1 a g2^-1, g2 b g1^-1),
/// moments (ab, a^-1 b^-1).  Used to calibrate the axiom signs.
class ReferenceDouble : public QHSpace {
 public:
  explicit ReferenceDouble(Eigen::Index n) : n_(n) {}
  std::string name() const override { return "D"; }
  std::vector<Mask> tangent_masks() const override;
  std::vector<GroupFactor> groups() const override;
  Point sample(Rng& rng) const override;
  Point act(const GroupElement& g, const Point& p) const override;
  Tangent fundamental(const Point& p, const std::vector<Mat>& x) const override;
  Tangent push(const GroupElement& g, const Point& p, const Tangent& u) const override;
  std::vector<TwistedElement> moment(const Point& p) const override;
  std::vector<Mat> d_moment(const Point& p, const Tangent& u) const override;
  Cplx omega(const Point& p, const Tangent& u, const Tangent& v) const override;

 private:
  Eigen::Index n_;
};

/// D(φ, ψ): points (x, y), action x -> g1 x φ(g2)^-1, y -> g1 y ψ^-1(g2)^-1,
/// moments (x φψ(y^-1), φψ) and (φ^-1(x^-1 y), φ^-1 ψ^-1).
class TwistedDouble : public QHSpace {
 public:
  TwistedDouble(Automorphism phi, Automorphism psi);
  std::string name() const override { return "D(phi,psi)"; }
  std::vector<Mask> tangent_masks() const override;
  std::vector<GroupFactor> groups() const override;
  Point sample(Rng& rng) const override;
  Point act(const GroupElement& g, const Point& p) const override;
  Tangent fundamental(const Point& p, const std::vector<Mat>& x) const override;
  Tangent push(const GroupElement& g, const Point& p, const Tangent& u) const override;
  std::vector<TwistedElement> moment(const Point& p) const override;
  std::vector<Mat> d_moment(const Point& p, const Tangent& u) const override;
  Cplx omega(const Point& p, const Tangent& u, const Tangent& v) const override;

 private:
  Eigen::Index n_;
  Automorphism phi_, psi_, phipsi_, phi_inv_, psi_inv_, phi_inv_psi_inv_;
};

/// M1 x M2 with the product action; groups and moments are concatenated.
class ProductSpace : public QHSpace {
 public:
  ProductSpace(SpacePtr a, SpacePtr b);
  std::string name() const override;
  std::vector<Mask> tangent_masks() const override;
  std::vector<GroupFactor> groups() const override;
  Point sample(Rng& rng) const override;
  Point act(const GroupElement& g, const Point& p) const override;
  Tangent fundamental(const Point& p, const std::vector<Mat>& x) const override;
  Tangent push(const GroupElement& g, const Point& p, const Tangent& u) const override;
  std::vector<TwistedElement> moment(const Point& p) const override;
  std::vector<Mat> d_moment(const Point& p, const Tangent& u) const override;
  Cplx omega(const Point& p, const Tangent& u, const Tangent& v) const override;
  std::vector<Mat> chi_frame(const Point& p, const Tangent& u) const override;

 private:
  std::pair<Point, Point> split(const Point& p) const;
  SpacePtr a_, b_;
  std::size_t na_, ga_;
};

/// Fuses group factors i < j of one space: the diagonal subgroup acts, the
/// fused moment is μ_i μ_j, and ω gains ½⟨μ_i^*θ ∧ μ_j^*θ̄⟩.
class InternallyFused : public QHSpace {
 public:
  InternallyFused(SpacePtr base, std::size_t i, std::size_t j);
  std::string name() const override;
  std::vector<Mask> tangent_masks() const override { return base_->tangent_masks(); }
  std::vector<GroupFactor> groups() const override;
  Point sample(Rng& rng) const override { return base_->sample(rng); }
  Point act(const GroupElement& g, const Point& p) const override;
  Tangent fundamental(const Point& p, const std::vector<Mat>& x) const override;
  Tangent push(const GroupElement& g, const Point& p, const Tangent& u) const override;
  std::vector<TwistedElement> moment(const Point& p) const override;
  std::vector<Mat> d_moment(const Point& p, const Tangent& u) const override;
  Cplx omega(const Point& p, const Tangent& u, const Tangent& v) const override;
  /// The fused component in the frame Ad_(μ_j): θ_i + Ad_(μ_j) θ_j.
  std::vector<Mat> chi_frame(const Point& p, const Tangent& u) const override;

  const QHSpace& base() const { return *base_; }

 private:
  std::vector<Mat> expand(const std::vector<Mat>& g) const;
  SpacePtr base_;
  std::size_t i_, j_;
};

/// M1 ⊛ M2 over their first group factors; throws std::invalid_argument when
/// the ranks differ.
SpacePtr fuse(SpacePtr a, SpacePtr b);

/// D(φ, ψ) with its two factors fused; moment in G(φψφ^-1ψ^-1).
SpacePtr internally_fused_double(const Automorphism& phi, const Automorphism& psi);

struct SurfaceData {
  int genus = 0;
  std::vector<IrregularClass> boundary;
  std::vector<Automorphism> twists;  // (φ_1, ψ_1, ..., φ_g, ψ_g); missing entries are id
  Eigen::Index rank() const { return boundary.empty() ? 0 : boundary.front().rank(); }
};

/// A(Q_1) ⊛ ... ⊛ A(Q_m) ⊛ 𝔻_1 ⊛ ... ⊛ 𝔻_g, unreduced.  Groups are [G, H_1, ..., H_m].
struct AssembledSpace {
  SpacePtr space;
  std::vector<std::shared_ptr<const FissionSpace>> poles;
  std::vector<Automorphism> handle_twists;  // φ_j, ψ_j interleaved
  std::size_t point_factors_per_handle = 2;
  /// |μ_G(p) - 1| / max(1, |μ_G(p)|); the quotient constraint.
  double constraint_residual(const Point& p) const;
  Automorphism total_twist(const Point& p) const;
};

/// Throws std::invalid_argument when the boundary is empty or the ranks differ.
AssembledSpace assemble(const SurfaceData& S);

/// Values of a Stokes representation on generators.
struct StokesRepresentation {
  struct Pole {
    Mat C, h;
    std::vector<Mat> S;
  };
  std::vector<Pole> poles;
  std::vector<std::pair<Mat, Mat>> handles;
  /// Value on an extra untwisted boundary loop; when absent the relation is product = 1.
  std::optional<Mat> outer;
};

StokesRepresentation representation_from_point(const AssembledSpace& A, const Point& p);

struct RepresentationReport {
  bool condition_boundary = false;  // formal monodromies in H(d)
  bool condition_stokes = false;    // Stokes factors in Sto_d
  double relation_residual = 0;
  std::vector<std::vector<Cplx>> invariant_spectra;  // eigenvalues of h_i^(ord sigma_i) per pole
  bool pass(double tol = 1e-9) const { return condition_boundary && condition_stokes && relation_residual < tol; }
};

/// Throws std::invalid_argument on a malformed generator set.
RepresentationReport check_representation(const StokesRepresentation& rho, const AssembledSpace& A);

/// Equal as multisets within tol (relative to the largest modulus).
bool spectra_match(const std::vector<Cplx>& a, const std::vector<Cplx>& b, double tol = 1e-9);

/// ρ'(γ) = k_j ρ(γ) k_i^-1 for k = (k_1, ..., k_m) in the product of the Levis.
StokesRepresentation act_levi(const std::vector<Mat>& k, const StokesRepresentation& rho);

struct LeafDimension {
  std::int64_t dim_hom = 0;
  std::int64_t dim_levi = 0;
  std::int64_t heuristic = 0;
  std::string flag;
};

LeafDimension leaf_dimension(const SurfaceData& S, const std::vector<std::int64_t>& class_dims);

}  // namespace twild
