#pragma once

// The twisted fission space A(Q) = G x H(d) x prod_d Sto_d for G = GL_N.

#include <optional>
#include <vector>

#include "twild/qh_space.hpp"
#include "twild/stokes.hpp"

namespace twild {

struct FissionModel {
  StokesStructure stokes;
  Eigen::Index N = 0;
  Mat P;                           // block permutation of sigma
  Mask levi;                       // Lie(H)
  std::vector<Mask> stokes_masks;  // s_d, one per singular direction

  static FissionModel from_class(const IrregularClass& Q);
  static FissionModel from_structure(StokesStructure S);

  std::size_t s() const { return stokes_masks.size(); }
  /// N^2 + dim H + sum of dim s_d.
  std::int64_t dimension() const;
  /// Every s_d closes under brackets and is nilpotent.
  bool stokes_algebras_ok() const;
};

/// A point (C, h, S_1, ..., S_s).
struct FissionPoint {
  Mat C;
  Mat h;
  std::vector<Mat> S;
};

/// Resolution of the bare one-form in the two-form: C^* θ̄ (default) or C_s^* θ̄.
enum class GammaBar { First, Last };

/// Overall sign of ω.  Printed is the two-form read with the pairing used for
/// the calibration double; it has the opposite orientation to that double (on
/// the tame class a = C^-1, b = hC identifies the two with equal moment maps
/// and ω_printed = -ω_double).  Calibrated = -Printed matches the frozen signs.
enum class Orientation { Calibrated, Printed };

/// Point layout [C, h, S_1, ..., S_s]; group factors [G, H] with moment
/// components (C^-1 h S_s ... S_1 C, id) and (h^-1 P, inner(P^-1)).
class FissionSpace : public QHSpace {
 public:
  explicit FissionSpace(FissionModel model, GammaBar resolution = GammaBar::First, bool corrupt = false,
                        Orientation orientation = Orientation::Calibrated);

  const FissionModel& model() const { return model_; }

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

  static Point pack(const FissionPoint& fp);
  static FissionPoint unpack(const Point& p);

  /// Residuals of the point invariants: h in H(d) and log S_d in s_d.
  bool valid_point(const Point& p, double tol = 1e-9) const;

 private:
  FissionModel model_;
  GammaBar resolution_;
  bool corrupt_;
  Orientation orientation_;
};

struct ParabolicReport {
  std::size_t period = 0;   // minimal period of the root-set sequence
  std::size_t half = 0;     // l
  bool periodic = false;    // R_{j+2l} = R_j over a full turn of sigma
  bool disjoint = false;    // every window of l sets is pairwise disjoint
  bool closed = false;      // window unions are closed under composition of roots
  bool complementary = false;  // union and its opposite partition the off-Levi roots
  bool dims_ok = false;     // window dims sum to (N^2 - dim H)/2
  std::vector<std::int64_t> window_dims;
  bool ok() const { return periodic && disjoint && closed && complementary && dims_ok; }
};

/// Throws std::invalid_argument when the class has more than one level or no
/// singular directions.
ParabolicReport parabolic_span_check(const FissionModel& model);

}  // namespace twild
