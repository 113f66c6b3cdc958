#include "twild/qh_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace twild {

const AxiomSigns kAxiomSigns{1.0, 1.0};

std::size_t QHSpace::dimension() const {
  std::size_t d = 0;
  for (const auto& m : tangent_masks()) d += static_cast<std::size_t>(m.sum());
  return d;
}

Point QHSpace::move(const Point& p, const Tangent& u, double t) const {
  Point out = p;
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = expm(t * u[k]) * p[k];
  return out;
}

Tangent QHSpace::random_tangent(Rng& rng) const {
  Tangent u;
  for (const auto& m : tangent_masks()) u.push_back(random_masked(rng, m));
  return u;
}

std::vector<Tangent> QHSpace::tangent_basis() const {
  const auto masks = tangent_masks();
  Tangent zero;
  for (const auto& m : masks) zero.push_back(Mat::Zero(m.rows(), m.cols()));
  std::vector<Tangent> basis;
  for (std::size_t k = 0; k < masks.size(); ++k)
    for (auto& e : mask_basis(masks[k])) {
      Tangent u = zero;
      u[k] = std::move(e);
      basis.push_back(std::move(u));
    }
  return basis;
}

GroupElement QHSpace::random_group_element(Rng& rng) const {
  GroupElement g;
  for (const auto& f : groups()) g.push_back(random_invertible_masked(rng, f.lie));
  return g;
}

std::vector<Mat> QHSpace::random_lie(Rng& rng) const {
  std::vector<Mat> x;
  for (const auto& f : groups()) x.push_back(random_masked(rng, f.lie));
  return x;
}

Tangent add(const Tangent& a, const Tangent& b, Cplx scale) {
  Tangent out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += scale * b[k];
  return out;
}

Tangent bracket(const Tangent& a, const Tangent& b) {
  Tangent out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(-commutator(a[k], b[k]));
  return out;
}

double norm(const Tangent& u) {
  double acc = 0;
  for (const auto& m : u) acc += m.squaredNorm();
  return std::sqrt(acc);
}

Cplx cartan_three_form(const QHSpace& m, const Point& p, const Tangent& x, const Tangent& y, const Tangent& z) {
  const auto tx = m.chi_frame(p, x);
  const auto ty = m.chi_frame(p, y);
  const auto tz = m.chi_frame(p, z);
  Cplx sum = 0;
  for (std::size_t a = 0; a < tx.size(); ++a) sum += 0.5 * (tx[a] * commutator(ty[a], tz[a])).trace();
  return sum;
}

namespace {

// d/dt f(move(p, u, t)) at 0 by the Cauchy integral over |t| = h with
// kContourNodes trapezoid nodes.  Every f used here is holomorphic in t, so
// the error decays geometrically in the node count.
constexpr int kContourNodes = 16;

template <class F>
Cplx derivative(const QHSpace& m, const Point& p, const Tangent& u, double h, F&& f) {
  Cplx acc = 0;
  for (int k = 0; k < kContourNodes; ++k) {
    const Cplx z = std::polar(1.0, 2 * std::numbers::pi * k / kContourNodes);
    Point q = p;
    for (std::size_t a = 0; a < p.size(); ++a) q[a] = expm((h * z) * u[a]) * p[a];
    acc += f(q) / z;
  }
  return acc / (h * kContourNodes);
}

}  // namespace

Cplx d_omega(const QHSpace& m, const Point& p, const Tangent& u, const Tangent& v, const Tangent& w, double h) {
  auto om = [&](const Tangent& a, const Tangent& b) { return [&m, a, b](const Point& q) { return m.omega(q, a, b); }; };
  Cplx out = derivative(m, p, u, h, om(v, w)) - derivative(m, p, v, h, om(u, w)) + derivative(m, p, w, h, om(u, v));
  out += -m.omega(p, bracket(u, v), w) + m.omega(p, bracket(u, w), v) - m.omega(p, bracket(v, w), u);
  return out;
}

double qh1_residual(const QHSpace& m, const Point& p, const Tangent& u, const Tangent& v, const Tangent& w, double h,
                    const AxiomSigns& signs) {
  return std::abs(d_omega(m, p, u, v, w, h) + signs.chi * cartan_three_form(m, p, u, v, w));
}

double qh2_residual(const QHSpace& m, const Point& p, const std::vector<Mat>& x, const Tangent& u,
                    const AxiomSigns& signs) {
  const auto vx = m.fundamental(p, x);
  const auto mu = m.moment(p);
  const auto theta = m.d_moment(p, u);
  Cplx pairing = 0;
  for (std::size_t a = 0; a < mu.size(); ++a)
    pairing += ((theta[a] + mu[a].adjoint(theta[a])) * x[a]).trace();
  return std::abs(m.omega(p, vx, u) - signs.moment * 0.5 * pairing);
}

namespace {

int numeric_rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++r;
  return r;
}

}  // namespace

KernelReport qh3_kernel(const QHSpace& m, const Point& p, double tol) {
  const auto basis = m.tangent_basis();
  const auto D = static_cast<Eigen::Index>(basis.size());
  const auto groups = m.groups();

  Mat omega = Mat::Zero(D, D);
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = a + 1; b < D; ++b) {
      omega(a, b) = m.omega(p, basis[a], basis[b]);
      omega(b, a) = -omega(a, b);
    }

  Eigen::Index rows = 0;
  for (const auto& g : groups) rows += g.lie.sum();
  Mat jac = Mat::Zero(rows, D);
  for (Eigen::Index b = 0; b < D; ++b) {
    const auto theta = m.d_moment(p, basis[b]);
    Eigen::Index r = 0;
    for (std::size_t a = 0; a < groups.size(); ++a)
      for (Eigen::Index i = 0; i < groups[a].lie.rows(); ++i)
        for (Eigen::Index j = 0; j < groups[a].lie.cols(); ++j)
          if (groups[a].lie(i, j)) jac(r++, b) = theta[a](i, j);
  }

  Mat stacked(D + rows, D);
  stacked << omega, jac;
  KernelReport rep;
  rep.dimension = static_cast<int>(D);
  rep.rank_omega = numeric_rank(omega, tol);
  rep.rank_stacked = numeric_rank(stacked, tol);
  return rep;
}

double equivariance_residual(const QHSpace& m, const Point& p, const GroupElement& g) {
  const auto before = m.moment(p);
  const auto after = m.moment(m.act(g, p));
  double worst = 0;
  for (std::size_t a = 0; a < before.size(); ++a) {
    const auto expected = twisted_conjugate(g[a], before[a]);
    if (!after[a].phi.same_as(expected.phi)) return std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, expected.g.norm());
    worst = std::max(worst, (after[a].g - expected.g).norm() / scale);
  }
  return worst;
}

double invariance_residual(const QHSpace& m, const Point& p, const GroupElement& g, const Tangent& u,
                           const Tangent& v) {
  const Cplx w0 = m.omega(p, u, v);
  const Cplx w1 = m.omega(m.act(g, p), m.push(g, p, u), m.push(g, p, v));
  return std::abs(w0 - w1) / std::max(1.0, std::abs(w0));
}

}  // namespace twild
