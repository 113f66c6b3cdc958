#include "twild/fission.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

namespace twild {

FissionModel FissionModel::from_class(const IrregularClass& Q) { return from_structure(singular_directions(Q)); }

FissionModel FissionModel::from_structure(StokesStructure S) {
  FissionModel m;
  m.N = S.formal.N;
  m.P = S.formal.permutation();
  m.levi = S.formal.levi_mask();
  const auto& fg = S.formal;
  for (const auto& sd : S.directions) {
    Mask mask = Mask::Zero(m.N, m.N);
    for (const auto& r : sd.roots) mask.block(fg.offsets[r.i], fg.offsets[r.j], fg.blocks[r.i], fg.blocks[r.j]).setOnes();
    m.stokes_masks.push_back(mask);
  }
  m.stokes = std::move(S);
  return m;
}

std::int64_t FissionModel::dimension() const {
  std::int64_t d = N * N + levi.sum();
  for (const auto& mask : stokes_masks) d += mask.sum();
  return d;
}

bool FissionModel::stokes_algebras_ok() const {
  for (const auto& mask : stokes_masks) {
    // closure: E_ab E_bc = E_ac must stay inside the mask
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = 0; b < N; ++b)
        for (Eigen::Index c = 0; c < N; ++c)
          if (mask(a, b) && mask(b, c) && !mask(a, c)) return false;
    // nilpotency: the support graph has no cycles
    Eigen::MatrixXd adj = mask.cast<double>();
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(N, N);
    for (Eigen::Index k = 0; k < N; ++k) pw = pw * adj;
    if (pw.cwiseAbs().sum() != 0.0) return false;
  }
  return true;
}

FissionSpace::FissionSpace(FissionModel model, GammaBar resolution, bool corrupt, Orientation orientation)
    : model_(std::move(model)), resolution_(resolution), corrupt_(corrupt), orientation_(orientation) {}

std::string FissionSpace::name() const { return "A(Q)"; }

std::vector<Mask> FissionSpace::tangent_masks() const {
  std::vector<Mask> out{Mask::Ones(model_.N, model_.N), model_.levi};
  out.insert(out.end(), model_.stokes_masks.begin(), model_.stokes_masks.end());
  return out;
}

std::vector<GroupFactor> FissionSpace::groups() const {
  return {{"G", Mask::Ones(model_.N, model_.N)}, {"H", model_.levi}};
}

Point FissionSpace::pack(const FissionPoint& fp) {
  Point p{fp.C, fp.h};
  p.insert(p.end(), fp.S.begin(), fp.S.end());
  return p;
}

FissionPoint FissionSpace::unpack(const Point& p) {
  FissionPoint fp;
  fp.C = p.at(0);
  fp.h = p.at(1);
  fp.S.assign(p.begin() + 2, p.end());
  return fp;
}

Point FissionSpace::sample(Rng& rng) const {
  FissionPoint fp;
  fp.C = random_invertible(rng, model_.N);
  fp.h = random_invertible_masked(rng, model_.levi) * model_.P;
  for (const auto& mask : model_.stokes_masks) fp.S.push_back(exp_nilpotent(random_masked(rng, mask)));
  return pack(fp);
}

Point FissionSpace::act(const GroupElement& g, const Point& p) const {
  const Mat& gg = g.at(0);
  const Mat& k = g.at(1);
  const Mat kinv = k.inverse();
  Point out = p;
  out[0] = k * p[0] * gg.inverse();
  for (std::size_t i = 1; i < p.size(); ++i) out[i] = k * p[i] * kinv;
  return out;
}

Tangent FissionSpace::fundamental(const Point& p, const std::vector<Mat>& x) const {
  const Mat& xg = x.at(0);
  const Mat& k = x.at(1);
  Tangent u(p.size());
  u[0] = k - p[0] * xg * p[0].inverse();
  for (std::size_t i = 1; i < p.size(); ++i) u[i] = k - p[i] * k * p[i].inverse();
  return u;
}

Tangent FissionSpace::push(const GroupElement& g, const Point&, const Tangent& u) const {
  const Mat& k = g.at(1);
  const Mat kinv = k.inverse();
  Tangent out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = k * u[i] * kinv;
  return out;
}

namespace {

struct PointData {
  std::vector<Mat> Ci, Ci_inv;  // C_0 .. C_s
  Mat B, b, b_inv, h_inv;
};

PointData point_data(const Point& p) {
  PointData d;
  const std::size_t s = p.size() - 2;
  d.Ci.push_back(p[0]);
  for (std::size_t i = 1; i <= s; ++i) d.Ci.push_back(p[1 + i] * d.Ci.back());
  for (const auto& c : d.Ci) d.Ci_inv.push_back(c.inverse());
  d.B = Mat::Identity(p[0].rows(), p[0].cols());
  for (std::size_t i = 1; i <= s; ++i) d.B = p[1 + i] * d.B;
  d.b = p[1] * d.B;
  d.b_inv = d.b.inverse();
  d.h_inv = p[1].inverse();
  return d;
}

struct Forms {
  std::vector<Mat> gbar;  // γ̄_0 .. γ̄_s
  std::vector<Mat> gam;   // γ_0 .. γ_s
  Mat betabar, etahat;
};

Forms forms(const Point& p, const PointData& d, const Tangent& u) {
  const std::size_t s = p.size() - 2;
  Forms f;
  f.gbar.push_back(u[0]);
  for (std::size_t i = 1; i <= s; ++i) {
    const Mat& S = p[1 + i];
    f.gbar.push_back(u[1 + i] + S * f.gbar.back() * S.inverse());
  }
  for (std::size_t i = 0; i <= s; ++i) f.gam.push_back(d.Ci_inv[i] * f.gbar[i] * d.Ci[i]);
  const Mat& h = p[1];
  f.betabar = u[1] + h * (f.gbar[s] - d.B * u[0] * d.B.inverse()) * d.h_inv;
  f.etahat = d.h_inv * u[1] * h;
  return f;
}

}  // namespace

std::vector<TwistedElement> FissionSpace::moment(const Point& p) const {
  const auto d = point_data(p);
  const Mat& C = p[0];
  return {{d.Ci_inv[0] * d.b * C, Automorphism::identity(model_.N)},
          {d.h_inv * model_.P, Automorphism::inner(model_.P.inverse())}};
}

std::vector<Mat> FissionSpace::d_moment(const Point& p, const Tangent& u) const {
  const auto d = point_data(p);
  const auto f = forms(p, d, u);
  const Mat& c = u[0];
  const Mat b_db = d.b_inv * f.betabar * d.b;
  const Mat theta_g = d.Ci_inv[0] * (-d.b_inv * c * d.b + b_db + c) * d.Ci[0];
  return {theta_g, -u[1]};
}

Cplx FissionSpace::omega(const Point& p, const Tangent& u, const Tangent& v) const {
  const auto d = point_data(p);
  const auto fu = forms(p, d, u);
  const auto fv = forms(p, d, v);
  const std::size_t s = p.size() - 2;
  const Mat& gu = resolution_ == GammaBar::First ? fu.gbar[0] : fu.gbar[s];
  const Mat& gv = resolution_ == GammaBar::First ? fv.gbar[0] : fv.gbar[s];

  Cplx two = 0;
  two += wedge(gu, d.b * gv * d.b_inv, gv, d.b * gu * d.b_inv);
  two += wedge(gu, fv.betabar, gv, fu.betabar);
  const Cplx eta_term = wedge(fu.gbar[s], fv.etahat, fv.gbar[s], fu.etahat);
  two += corrupt_ ? -eta_term : eta_term;
  for (std::size_t i = 1; i <= s; ++i) two -= wedge(fu.gam[i], fv.gam[i - 1], fv.gam[i], fu.gam[i - 1]);
  return (orientation_ == Orientation::Printed ? 0.5 : -0.5) * two;
}

bool FissionSpace::valid_point(const Point& p, double tol) const {
  if (p.size() != 2 + model_.s()) return false;
  if (!in_twist_coset(p[1], model_.levi, model_.P, tol)) return false;
  const auto n = model_.N;
  for (std::size_t i = 0; i < model_.s(); ++i) {
    const Mat& S = p[2 + i];
    Mat y = S - Mat::Identity(n, n);
    Mat pw = Mat::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) pw = pw * y;
    const double scale = 1.0 + S.norm();
    if (pw.norm() > tol * std::pow(scale, static_cast<double>(n))) return false;
    if (off_mask_norm(log_unipotent(S), model_.stokes_masks[i]) > tol * scale) return false;
  }
  return true;
}

namespace {

using RootSet = std::set<std::pair<std::size_t, std::size_t>>;

}  // namespace

ParabolicReport parabolic_span_check(const FissionModel& model) {
  const auto& S = model.stokes;
  if (S.directions.empty()) throw std::invalid_argument("no singular directions");
  std::set<Rational> levels;
  for (const auto& sd : S.directions)
    for (const auto& r : sd.roots) levels.insert(r.level);
  if (levels.size() != 1) throw std::invalid_argument("class has more than one level");

  const auto& sigma = S.system.sigma;
  const std::size_t n = sigma.size();
  std::vector<std::size_t> sigma_inv(n);
  for (std::size_t i = 0; i < n; ++i) sigma_inv[sigma[i]] = i;

  std::size_t order = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len = 1;
    for (std::size_t j = sigma[i]; j != i; j = sigma[j]) ++len;
    order = std::lcm(order, len);
  }
  const std::size_t s = S.directions.size();
  const std::size_t L = s * order;

  // R_{i s + j} = sigma^{-i}(R_j)
  std::vector<RootSet> seq(2 * L);
  for (std::size_t m = 0; m < 2 * L; ++m) {
    const std::size_t turns = m / s;
    for (const auto& r : S.directions[m % s].roots) {
      std::size_t a = r.i, b = r.j;
      for (std::size_t t = 0; t < turns; ++t) {
        a = sigma_inv[a];
        b = sigma_inv[b];
      }
      seq[m].insert({a, b});
    }
  }

  ParabolicReport rep;
  for (std::size_t p = 1; p <= L; ++p) {
    bool ok = true;
    for (std::size_t m = 0; m < L && ok; ++m) ok = seq[m] == seq[m + p];
    if (ok) {
      rep.period = p;
      break;
    }
  }
  if (rep.period == 0 || rep.period % 2 != 0) return rep;
  rep.half = rep.period / 2;
  rep.periodic = true;
  for (std::size_t m = 0; m + rep.period < 2 * L; ++m) rep.periodic = rep.periodic && seq[m] == seq[m + rep.period];

  const auto& fg = S.formal;
  const std::int64_t target = (fg.N * fg.N - fg.dim_levi()) / 2;
  rep.disjoint = rep.closed = rep.complementary = rep.dims_ok = true;
  for (std::size_t j = 0; j < rep.period; ++j) {
    RootSet window;
    std::size_t count = 0;
    for (std::size_t m = j; m < j + rep.half; ++m) {
      count += seq[m].size();
      window.insert(seq[m].begin(), seq[m].end());
    }
    if (count != window.size()) rep.disjoint = false;
    for (const auto& [a, b] : window)
      for (const auto& [c, d] : window)
        if (b == c && a != d && !window.count({a, d})) rep.closed = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const bool in = window.count({a, b}) > 0;
        const bool opp = window.count({b, a}) > 0;
        if (in == opp) rep.complementary = false;
      }
    std::int64_t dim = 0;
    for (const auto& [a, b] : window) dim += fg.blocks[a] * fg.blocks[b];
    rep.window_dims.push_back(dim);
    if (dim != target) rep.dims_ok = false;
  }
  return rep;
}

}  // namespace twild
