#include "twild/fusion.hpp"

#include <numeric>
#include <stdexcept>

namespace twild {

const double kFusionSign = 1.0;

// ReferenceDouble

std::vector<Mask> ReferenceDouble::tangent_masks() const { return {Mask::Ones(n_, n_), Mask::Ones(n_, n_)}; }

std::vector<GroupFactor> ReferenceDouble::groups() const {
  return {{"G1", Mask::Ones(n_, n_)}, {"G2", Mask::Ones(n_, n_)}};
}

Point ReferenceDouble::sample(Rng& rng) const { return {random_invertible(rng, n_), random_invertible(rng, n_)}; }

Point ReferenceDouble::act(const GroupElement& g, const Point& p) const {
  return {g[0] * p[0] * g[1].inverse(), g[1] * p[1] * g[0].inverse()};
}

Tangent ReferenceDouble::fundamental(const Point& p, const std::vector<Mat>& x) const {
  return {x[0] - p[0] * x[1] * p[0].inverse(), x[1] - p[1] * x[0] * p[1].inverse()};
}

Tangent ReferenceDouble::push(const GroupElement& g, const Point&, const Tangent& u) const {
  return {g[0] * u[0] * g[0].inverse(), g[1] * u[1] * g[1].inverse()};
}

std::vector<TwistedElement> ReferenceDouble::moment(const Point& p) const {
  const auto id = Automorphism::identity(n_);
  return {{p[0] * p[1], id}, {p[0].inverse() * p[1].inverse(), id}};
}

std::vector<Mat> ReferenceDouble::d_moment(const Point& p, const Tangent& u) const {
  const Mat ai = p[0].inverse();
  const Mat bi = p[1].inverse();
  return {bi * ai * u[0] * p[0] * p[1] + bi * u[1] * p[1], -p[1] * u[0] * bi - u[1]};
}

Cplx ReferenceDouble::omega(const Point& p, const Tangent& u, const Tangent& v) const {
  const Mat ai = p[0].inverse();
  const Mat bi = p[1].inverse();
  auto a_theta = [&](const Tangent& t) -> Mat { return ai * t[0] * p[0]; };
  auto b_theta = [&](const Tangent& t) -> Mat { return bi * t[1] * p[1]; };
  return 0.5 * wedge(a_theta(u), v[1], a_theta(v), u[1]) + 0.5 * wedge(u[0], b_theta(v), v[0], b_theta(u));
}

// TwistedDouble

TwistedDouble::TwistedDouble(Automorphism phi, Automorphism psi)
    : n_(phi.size()),
      phi_(phi),
      psi_(psi),
      phipsi_(phi * psi),
      phi_inv_(phi.inverse()),
      psi_inv_(psi.inverse()),
      phi_inv_psi_inv_(phi.inverse() * psi.inverse()) {
  if (phi.size() != psi.size()) throw std::invalid_argument("twists of different rank");
}

std::vector<Mask> TwistedDouble::tangent_masks() const { return {Mask::Ones(n_, n_), Mask::Ones(n_, n_)}; }

std::vector<GroupFactor> TwistedDouble::groups() const {
  return {{"G1", Mask::Ones(n_, n_)}, {"G2", Mask::Ones(n_, n_)}};
}

Point TwistedDouble::sample(Rng& rng) const { return {random_invertible(rng, n_), random_invertible(rng, n_)}; }

Point TwistedDouble::act(const GroupElement& g, const Point& p) const {
  return {g[0] * p[0] * phi_.apply(g[1]).inverse(), g[0] * p[1] * psi_inv_.apply(g[1]).inverse()};
}

Tangent TwistedDouble::fundamental(const Point& p, const std::vector<Mat>& x) const {
  return {x[0] - p[0] * phi_.apply_lie(x[1]) * p[0].inverse(), x[0] - p[1] * psi_inv_.apply_lie(x[1]) * p[1].inverse()};
}

Tangent TwistedDouble::push(const GroupElement& g, const Point&, const Tangent& u) const {
  const Mat gi = g[0].inverse();
  return {g[0] * u[0] * gi, g[0] * u[1] * gi};
}

std::vector<TwistedElement> TwistedDouble::moment(const Point& p) const {
  return {{p[0] * phipsi_.apply(p[1].inverse()), phipsi_},
          {phi_inv_.apply(p[0].inverse() * p[1]), phi_inv_psi_inv_}};
}

std::vector<Mat> TwistedDouble::d_moment(const Point& p, const Tangent& u) const {
  const Mat xi = p[0].inverse();
  const Mat yi = p[1].inverse();
  const Mat t1 = p[1] * phipsi_.inverse().apply_lie(xi * u[0] * p[0]) * yi - u[1];
  const Mat t2 = psi_.apply_lie(yi * (u[1] - u[0]) * p[1]);
  return {t1, t2};
}

Cplx TwistedDouble::omega(const Point& p, const Tangent& u, const Tangent& v) const {
  const Mat xi = p[0].inverse();
  const Mat yi = p[1].inverse();
  auto pair = [&](const Tangent& a, const Tangent& b) -> Cplx {
    const Mat lhs = phi_inv_.apply_lie(xi * a[0] * p[0]);
    const Mat rhs = -psi_.apply_lie(yi * b[1] * p[1]);
    return -(a[0] * b[1]).trace() + (lhs * rhs).trace();
  };
  return 0.5 * (pair(u, v) - pair(v, u));
}

// ProductSpace

ProductSpace::ProductSpace(SpacePtr a, SpacePtr b)
    : a_(std::move(a)), b_(std::move(b)), na_(a_->tangent_masks().size()), ga_(a_->groups().size()) {}

std::string ProductSpace::name() const { return a_->name() + " x " + b_->name(); }

std::vector<Mask> ProductSpace::tangent_masks() const {
  auto out = a_->tangent_masks();
  const auto rest = b_->tangent_masks();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<GroupFactor> ProductSpace::groups() const {
  auto out = a_->groups();
  const auto rest = b_->groups();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::pair<Point, Point> ProductSpace::split(const Point& p) const {
  return {Point(p.begin(), p.begin() + static_cast<long>(na_)), Point(p.begin() + static_cast<long>(na_), p.end())};
}

namespace {

template <class T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::pair<std::vector<Mat>, std::vector<Mat>> split_at(const std::vector<Mat>& g, std::size_t k) {
  return {std::vector<Mat>(g.begin(), g.begin() + static_cast<long>(k)),
          std::vector<Mat>(g.begin() + static_cast<long>(k), g.end())};
}

}  // namespace

Point ProductSpace::sample(Rng& rng) const {
  auto pa = a_->sample(rng);
  return concat(std::move(pa), b_->sample(rng));
}

Point ProductSpace::act(const GroupElement& g, const Point& p) const {
  const auto [pa, pb] = split(p);
  const auto [ga, gb] = split_at(g, ga_);
  return concat(a_->act(ga, pa), b_->act(gb, pb));
}

Tangent ProductSpace::fundamental(const Point& p, const std::vector<Mat>& x) const {
  const auto [pa, pb] = split(p);
  const auto [xa, xb] = split_at(x, ga_);
  return concat(a_->fundamental(pa, xa), b_->fundamental(pb, xb));
}

Tangent ProductSpace::push(const GroupElement& g, const Point& p, const Tangent& u) const {
  const auto [pa, pb] = split(p);
  const auto [ua, ub] = split(u);
  const auto [ga, gb] = split_at(g, ga_);
  return concat(a_->push(ga, pa, ua), b_->push(gb, pb, ub));
}

std::vector<TwistedElement> ProductSpace::moment(const Point& p) const {
  const auto [pa, pb] = split(p);
  return concat(a_->moment(pa), b_->moment(pb));
}

std::vector<Mat> ProductSpace::d_moment(const Point& p, const Tangent& u) const {
  const auto [pa, pb] = split(p);
  const auto [ua, ub] = split(u);
  return concat(a_->d_moment(pa, ua), b_->d_moment(pb, ub));
}

Cplx ProductSpace::omega(const Point& p, const Tangent& u, const Tangent& v) const {
  const auto [pa, pb] = split(p);
  const auto [ua, ub] = split(u);
  const auto [va, vb] = split(v);
  return a_->omega(pa, ua, va) + b_->omega(pb, ub, vb);
}

std::vector<Mat> ProductSpace::chi_frame(const Point& p, const Tangent& u) const {
  const auto [pa, pb] = split(p);
  const auto [ua, ub] = split(u);
  return concat(a_->chi_frame(pa, ua), b_->chi_frame(pb, ub));
}

// InternallyFused

InternallyFused::InternallyFused(SpacePtr base, std::size_t i, std::size_t j) : base_(std::move(base)), i_(i), j_(j) {
  const auto g = base_->groups();
  if (!(i < j && j < g.size())) throw std::invalid_argument("fusion needs two distinct group factors");
  if (g[i].lie.rows() != g[j].lie.rows() || g[i].lie != g[j].lie)
    throw std::invalid_argument("fused group factors have different ranks");
}

std::string InternallyFused::name() const { return "fused(" + base_->name() + ")"; }

std::vector<GroupFactor> InternallyFused::groups() const {
  auto g = base_->groups();
  g.erase(g.begin() + static_cast<long>(j_));
  return g;
}

std::vector<Mat> InternallyFused::expand(const std::vector<Mat>& g) const {
  auto out = g;
  out.insert(out.begin() + static_cast<long>(j_), g[i_]);
  return out;
}

Point InternallyFused::act(const GroupElement& g, const Point& p) const { return base_->act(expand(g), p); }

Tangent InternallyFused::fundamental(const Point& p, const std::vector<Mat>& x) const {
  return base_->fundamental(p, expand(x));
}

Tangent InternallyFused::push(const GroupElement& g, const Point& p, const Tangent& u) const {
  return base_->push(expand(g), p, u);
}

std::vector<TwistedElement> InternallyFused::moment(const Point& p) const {
  auto mu = base_->moment(p);
  mu[i_] = compose(mu[i_], mu[j_]);
  mu.erase(mu.begin() + static_cast<long>(j_));
  return mu;
}

std::vector<Mat> InternallyFused::d_moment(const Point& p, const Tangent& u) const {
  const auto mu = base_->moment(p);
  auto theta = base_->d_moment(p, u);
  theta[i_] = mu[j_].adjoint_inverse(theta[i_]) + theta[j_];
  theta.erase(theta.begin() + static_cast<long>(j_));
  return theta;
}

std::vector<Mat> InternallyFused::chi_frame(const Point& p, const Tangent& u) const {
  const auto mu = base_->moment(p);
  const auto left = base_->d_moment(p, u);
  auto theta = base_->chi_frame(p, u);
  theta[i_] = left[i_] + mu[j_].adjoint(left[j_]);
  theta.erase(theta.begin() + static_cast<long>(j_));
  return theta;
}

Cplx InternallyFused::omega(const Point& p, const Tangent& u, const Tangent& v) const {
  const auto mu = base_->moment(p);
  const auto tu = base_->d_moment(p, u);
  const auto tv = base_->d_moment(p, v);
  const Mat bar_u = mu[j_].adjoint(tu[j_]);
  const Mat bar_v = mu[j_].adjoint(tv[j_]);
  return base_->omega(p, u, v) + kFusionSign * 0.5 * wedge(tu[i_], bar_v, tv[i_], bar_u);
}

SpacePtr fuse(SpacePtr a, SpacePtr b) {
  const auto ga = a->groups();
  const auto gb = b->groups();
  if (ga.empty() || gb.empty() || ga[0].lie.rows() != gb[0].lie.rows())
    throw std::invalid_argument("fusion of spaces over groups of different rank");
  auto prod = std::make_shared<ProductSpace>(std::move(a), std::move(b));
  return std::make_shared<InternallyFused>(prod, 0, ga.size());
}

SpacePtr internally_fused_double(const Automorphism& phi, const Automorphism& psi) {
  return std::make_shared<InternallyFused>(std::make_shared<TwistedDouble>(phi, psi), 0, 1);
}

// Assembly

double AssembledSpace::constraint_residual(const Point& p) const {
  const auto mu = space->moment(p).front();
  const auto n = mu.size();
  return (mu.g - Mat::Identity(n, n)).norm() / std::max(1.0, mu.g.norm());
}

Automorphism AssembledSpace::total_twist(const Point& p) const { return space->moment(p).front().phi; }

AssembledSpace assemble(const SurfaceData& S) {
  if (S.boundary.empty()) throw std::invalid_argument("a wild surface needs at least one boundary circle");
  const auto n = S.rank();
  AssembledSpace A;
  for (const auto& Q : S.boundary) {
    if (Q.rank() != n) throw std::invalid_argument("boundary classes of different rank");
    auto pole = std::make_shared<FissionSpace>(FissionModel::from_class(Q));
    A.poles.push_back(pole);
    A.space = A.space ? fuse(A.space, pole) : SpacePtr(pole);
  }
  for (int j = 0; j < S.genus; ++j) {
    const auto k = static_cast<std::size_t>(2 * j);
    const auto phi = k < S.twists.size() ? S.twists[k] : Automorphism::identity(n);
    const auto psi = k + 1 < S.twists.size() ? S.twists[k + 1] : Automorphism::identity(n);
    if (phi.size() != n || psi.size() != n) throw std::invalid_argument("handle twist of the wrong rank");
    A.handle_twists.push_back(phi);
    A.handle_twists.push_back(psi);
    A.space = fuse(A.space, internally_fused_double(phi, psi));
  }
  return A;
}

StokesRepresentation representation_from_point(const AssembledSpace& A, const Point& p) {
  StokesRepresentation rho;
  std::size_t at = 0;
  for (const auto& pole : A.poles) {
    const auto s = pole->model().s();
    StokesRepresentation::Pole v;
    v.C = p.at(at);
    v.h = p.at(at + 1);
    for (std::size_t d = 0; d < s; ++d) v.S.push_back(p.at(at + 2 + d));
    rho.poles.push_back(std::move(v));
    at += 2 + s;
  }
  for (std::size_t j = 0; j < A.handle_twists.size() / 2; ++j, at += 2) rho.handles.emplace_back(p.at(at), p.at(at + 1));
  rho.outer = A.space->moment(p).front().g;
  return rho;
}

RepresentationReport check_representation(const StokesRepresentation& rho, const AssembledSpace& A) {
  if (rho.poles.size() != A.poles.size()) throw std::invalid_argument("wrong number of boundary circles");
  if (2 * rho.handles.size() != A.handle_twists.size()) throw std::invalid_argument("wrong number of handles");
  RepresentationReport rep;
  rep.condition_boundary = rep.condition_stokes = true;
  const auto n = A.poles.front()->model().N;
  TwistedElement product{Mat::Identity(n, n), Automorphism::identity(n)};

  for (std::size_t i = 0; i < rho.poles.size(); ++i) {
    const auto& v = rho.poles[i];
    const auto& model = A.poles[i]->model();
    if (v.S.size() != model.s()) throw std::invalid_argument("wrong number of Stokes factors");
    if (v.C.rows() != n || v.h.rows() != n) throw std::invalid_argument("generator of the wrong size");
    if (!in_twist_coset(v.h, model.levi, model.P, 1e-9)) rep.condition_boundary = false;
    FissionPoint fp{v.C, model.P, v.S};
    if (!A.poles[i]->valid_point(FissionSpace::pack(fp))) rep.condition_stokes = false;

    Mat B = Mat::Identity(n, n);
    for (const auto& S : v.S) B = S * B;
    product = compose(product, {v.C.inverse() * v.h * B * v.C, Automorphism::identity(n)});

    // σ-order power of the formal monodromy
    std::size_t order = 1;
    const auto& sigma = model.stokes.formal.sigma;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      std::size_t len = 1;
      for (std::size_t b = sigma[a]; b != a; b = sigma[b]) ++len;
      order = std::lcm(order, len);
    }
    Mat hr = Mat::Identity(n, n);
    for (std::size_t k = 0; k < order; ++k) hr = hr * v.h;
    Eigen::ComplexEigenSolver<Mat> es(hr);
    const auto ev = es.eigenvalues();
    rep.invariant_spectra.emplace_back(ev.data(), ev.data() + ev.size());
  }
  for (std::size_t j = 0; j < rho.handles.size(); ++j) {
    const auto& [x, y] = rho.handles[j];
    const auto& phi = A.handle_twists[2 * j];
    const auto& psi = A.handle_twists[2 * j + 1];
    const TwistedElement m1{x * (phi * psi).apply(y.inverse()), phi * psi};
    const TwistedElement m2{phi.inverse().apply(x.inverse() * y), phi.inverse() * psi.inverse()};
    product = compose(product, compose(m1, m2));
  }
  const Mat target = rho.outer ? *rho.outer : Mat::Identity(n, n);
  rep.relation_residual = (product.g - target).norm() / std::max(1.0, target.norm());
  return rep;
}

bool spectra_match(const std::vector<Cplx>& a, const std::vector<Cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  double scale = 1.0;
  for (const auto& z : a) scale = std::max(scale, std::abs(z));
  std::vector<bool> used(b.size(), false);
  for (const auto& z : a) {
    std::size_t best = b.size();
    double dist = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(z - b[k]);
      if (best == b.size() || d < dist) {
        best = k;
        dist = d;
      }
    }
    if (dist > tol * scale) return false;
    used[best] = true;
  }
  return true;
}

StokesRepresentation act_levi(const std::vector<Mat>& k, const StokesRepresentation& rho) {
  if (k.size() != rho.poles.size()) throw std::invalid_argument("one Levi element per boundary circle");
  StokesRepresentation out = rho;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Mat ki = k[i].inverse();
    auto& v = out.poles[i];
    v.C = k[i] * v.C;
    v.h = k[i] * v.h * ki;
    for (auto& S : v.S) S = k[i] * S * ki;
  }
  return out;
}

LeafDimension leaf_dimension(const SurfaceData& S, const std::vector<std::int64_t>& class_dims) {
  LeafDimension out;
  const std::int64_t n = S.rank();
  for (const auto& Q : S.boundary) {
    const auto model = FissionModel::from_class(Q);
    out.dim_hom += model.dimension();
    out.dim_levi += model.levi.sum();
  }
  out.dim_hom += 2 * S.genus * n * n - 2 * n * n;
  out.heuristic = out.dim_hom - 2 * out.dim_levi;
  for (auto d : class_dims) out.heuristic += d;
  out.flag = "generic/free count, not valid at non-generic strata";
  if (out.heuristic <= 0) out.flag += "; non-positive: rigid or empty at generic parameters";
  return out;
}

}  // namespace twild
