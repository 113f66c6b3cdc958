// Acceptance checks 1-8.  Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "twild/fission.hpp"
#include "twild/fusion.hpp"
#include "twild/verify.hpp"

using namespace twild;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::int64_t nonzero_apples(const std::vector<CoverEntry>& cover) {
  std::int64_t n = 0;
  for (const auto& c : cover)
    if (!c.circle.representative().is_zero()) n += static_cast<std::int64_t>(apples(c.circle).size());
  return n;
}

// Criterion 1
void airy(Outcome& out) {
  const auto Q = load_preset("airy");
  const auto cover = adjoint_cover(Q);
  out.require(cover.size() == 2, "cover has two circles");
  out.require(cover.size() == 2 && cover[0].circle.representative().is_zero(), "cover contains <0>");
  out.require(cover.size() == 2 && same_circle(cover[1].circle.representative(), oracle::power(3, 2, 4)),
              "cover contains <4 z^(-3/2)>");
  out.require(cover_degree(cover) == 3, "cover degree 3");
  out.require(nonzero_apples(cover) == 3, "3 apples");
  const auto S = singular_directions(Q);
  out.require(S.directions.size() == 3, "|A| = 3");
  for (const auto& d : S.directions) out.require(d.dim == 1, "dim s_d = 1");
  out.detail << "degree " << cover_degree(cover) << ", apples " << nonzero_apples(cover) << ", |A| "
             << S.directions.size();
}

// Criterion 2
void cuberoot(Outcome& out) {
  const auto Q = load_preset("cuberoot");
  const auto cover = adjoint_cover(Q);
  out.require(cover_degree(cover) == 7, "cover degree 7");
  int zero = 0, three = 0;
  for (const auto& c : cover) {
    if (c.circle.representative().is_zero()) {
      ++zero;
      out.require(c.mult == 3, "<0> with multiplicity 3");
    } else {
      out.require(c.circle.ram() == 3 && c.mult == 1, "difference circles of degree 3");
      ++three;
    }
  }
  out.require(zero == 1 && three == 2, "<0> plus two degree-3 circles");
  out.require(nonzero_apples(cover) == 2, "2 apples");
  const auto S = singular_directions(Q);
  out.require(S.directions.size() == 2, "2 singular directions");
  for (const auto& d : S.directions) out.require(d.dim == 1, "dim 1");
  out.detail << "degree " << cover_degree(cover) << ", apples " << nonzero_apples(cover) << ", |A| "
             << S.directions.size();
}

// Criterion 3
void family(Outcome& out) {
  for (std::int64_t k : {1, 3, 5}) {
    for (std::int64_t n : {1, 2}) {
      const std::string name = "p1h n=" + std::to_string(n) + " k=" + std::to_string(k);
      const auto model = FissionModel::from_class(load_preset(name));
      out.require(static_cast<std::int64_t>(model.s()) == k, name + ": k directions");
      Mask upper = Mask::Zero(2 * n, 2 * n), lower = Mask::Zero(2 * n, 2 * n), levi = Mask::Zero(2 * n, 2 * n);
      upper.topRightCorner(n, n).setOnes();
      lower.bottomLeftCorner(n, n).setOnes();
      levi.topLeftCorner(n, n).setOnes();
      levi.bottomRightCorner(n, n).setOnes();
      for (std::size_t d = 0; d < model.s(); ++d) {
        const auto& m = model.stokes_masks[d];
        out.require(model.stokes.directions[d].dim == n * n, name + ": dim n^2");
        out.require(m == upper || m == lower, name + ": Stokes algebra is one off-diagonal block");
        if (d > 0) out.require(m != model.stokes_masks[d - 1], name + ": upper and lower alternate");
      }
      out.require(model.levi == levi, name + ": H = GL_n x GL_n");
      const Mat& P = model.P;
      out.require(P.topLeftCorner(n, n).norm() == 0 && P.bottomRightCorner(n, n).norm() == 0, name + ": P anti-diagonal");
      Rng rng(static_cast<std::uint64_t>(10 * k + n));
      Mat M = Mat::Zero(2 * n, 2 * n);
      M.topRightCorner(n, n) = random_invertible(rng, n, 10);
      M.bottomLeftCorner(n, n) = random_invertible(rng, n, 10);
      out.require(in_twist_coset(M, model.levi, P), name + ": anti-diagonal matrices lie in H(d)");
      out.require(!in_twist_coset(random_invertible(rng, 2 * n, 10), model.levi, P), name + ": dense matrix rejected");
    }
  }
  out.detail << "k in {1,3,5}, n in {1,2}";
}

IrregularClass random_class(std::mt19937_64& rng) {
  for (;;) {
    std::vector<ClassEntry> entries;
    std::int64_t rank = 0;
    const int circles = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < circles; ++c) {
      const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 4);
      const std::int64_t mult = 1 + static_cast<std::int64_t>(rng() % 2);
      if (rank + r * mult > 6) continue;
      std::vector<RawTerm> raw;
      std::int64_t k = 1 + static_cast<std::int64_t>(rng() % (2 * r));
      while (std::gcd(k, r) != 1) ++k;
      raw.push_back({Rational(k, r), Coefficient(Cyclo(Rational(1 + static_cast<std::int64_t>(rng() % 3))) *
                                                 Cyclo::root_of_unity(4, static_cast<std::int64_t>(rng() % 4)))});
      if (rng() % 2 && k > 1) raw.push_back({Rational(1, r), Coefficient::integer(static_cast<std::int64_t>(rng() % 5) - 2)});
      const auto q = normalize(raw);
      if (rng() % 4 == 0 && rank + mult <= 6) {
        entries.push_back({CircleClass(Exponent{}), mult});
        rank += mult;
        continue;
      }
      entries.push_back({CircleClass(q), mult});
      rank += r * mult;
    }
    if (entries.empty()) continue;
    try {
      IrregularClass Q(entries);
      if (Q.rank() >= 2) return Q;
    } catch (const std::invalid_argument&) {
    }
  }
}

// Criterion 4
void untwisting(Outcome& out) {
  std::mt19937_64 rng(2024);
  int ramified = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto Q = random_class(rng);
    const auto tag = "class " + std::to_string(trial);
    for (const auto& e : Q.entries()) out.require(e.circle.ram() <= 4, tag + ": ram <= 4");
    out.require(Q.rank() <= 6, tag + ": N <= 6");
    const auto U = untwist(Q);
    ramified += U.r > 1;
    out.require(U.lifted_structure.directions.size() == static_cast<std::size_t>(U.r) * U.base.directions.size(),
                tag + ": |A'| = r |A|");
    bool dims = !U.first_sheet.empty() || U.base.directions.empty();
    for (const auto& m : U.first_sheet) dims = dims && m.match && m.dim == m.base_dim;
    out.require(dims && U.first_sheet.size() == U.base.directions.size(), tag + ": first-sheet dims equal base dims");
    out.require(U.ok(), tag + ": untwist report consistent");
    out.require(check_descent(Q), tag + ": descent");
    out.require(oracle::singular_directions(U.base.system).size() == U.base.directions.size(),
                tag + ": base directions match the floating-point oracle");
    out.require(oracle::singular_directions(U.lifted).size() == U.lifted_structure.directions.size(),
                tag + ": lifted directions match the floating-point oracle");
  }
  out.detail << "50 classes, " << ramified << " ramified";
}

struct SweepSpec {
  std::string descriptor;
};

Thresholds criterion_thresholds() {
  Thresholds t;
  t.qh = 1e-6;
  t.equivariance = 1e-9;
  t.invariance = 1e-9;
  t.kernel = 0;
  return t;
}

bool sweep(Outcome& out, const std::string& descriptor, std::ostringstream& worst) {
  VerifyOptions o;
  o.seeds = 100;
  o.thresholds = criterion_thresholds();
  const auto r = verify(build_model(descriptor), o);
  out.require(r.pass, descriptor + " (" + (r.failures.empty() ? std::string("?") : r.failures.front()) + ")");
  worst << descriptor << ": qh1 " << r.qh1.max << ", qh2 " << r.qh2.max << "; ";
  return r.pass;
}

// Criterion 5
void axioms(Outcome& out) {
  const auto start = Clock::now();
  std::ostringstream worst;
  for (const char* name : {"airy", "cuberoot", "p1h n=1 k=1", "p1h n=1 k=3", "p1h n=2 k=3"}) sweep(out, name, worst);
  const double t = seconds_since(start);
  out.require(t < 300, "runtime under 5 min");
  out.detail << worst.str() << "100 seeds each";
}

// Criterion 6
void fusion(Outcome& out) {
  std::ostringstream worst;
  for (const char* d : {"fuse:airy+p1h n=1 k=1", "fuse:p1h n=2 k=3+p1h n=2 k=1", "double:id,id", "double:inner,inner"})
    sweep(out, d, worst);

  // moment twists of fused spaces equal the composed twists
  Rng rng(66);
  const Eigen::Index n = 2;
  auto tag = [&](int k) {
    switch (k % 3) {
      case 0: return Automorphism::identity(n);
      case 1: return Automorphism::inner(random_invertible(rng, n, 10));
      default: return Automorphism::outer(random_invertible(rng, n, 10));
    }
  };
  int checks = 0;
  for (int a = 0; a < 9; ++a) {
    for (int b = 0; b < 9; ++b) {
      const auto p1 = tag(a), q1 = tag(a / 3), p2 = tag(b), q2 = tag(b / 3);
      const auto D1 = internally_fused_double(p1, q1), D2 = internally_fused_double(p2, q2);
      const auto t1 = p1 * q1 * p1.inverse() * q1.inverse();
      const auto t2 = p2 * q2 * p2.inverse() * q2.inverse();
      const auto A = std::make_shared<FissionSpace>(FissionModel::from_class(load_preset("airy")));
      const std::vector<std::pair<SpacePtr, Automorphism>> cases{
          {D1, t1}, {fuse(D1, D2), t1 * t2}, {fuse(D2, D1), t2 * t1}, {fuse(A, D1), t1}, {fuse(fuse(D1, A), D2), t1 * t2}};
      for (const auto& [M, twist] : cases) {
        const auto p = M->sample(rng);
        out.require(M->moment(p).front().phi.same_as(twist, 1e-12), "fused twist equals the composite");
        ++checks;
      }
    }
  }
  const auto F = build_model("fuse:airy+p1h n=1 k=1");
  const auto& fused = dynamic_cast<const InternallyFused&>(*F.space);
  const auto p = F.space->sample(rng);
  const auto parts = fused.base().moment(p);
  out.require(F.space->moment(p).front().phi.same_as(parts[0].phi * parts[2].phi, 1e-12), "A(Q) x A(Q') twist");
  out.detail << worst.str() << checks << " twist compositions";
}

// Criterion 7
void cosets(Outcome& out) {
  std::vector<FissionModel> models;
  for (const char* name : {"airy", "cuberoot", "p1h n=2 k=3", "p1h n=2 k=1", "two_level", "tame"})
    models.push_back(FissionModel::from_class(load_preset(name)));
  models.push_back(FissionModel::from_class(
      IrregularClass({{CircleClass(oracle::power(1, 3)), 1}, {CircleClass(oracle::power(1, 2)), 1}, {CircleClass(Exponent{}), 1}})));
  Rng rng(77);
  const double tol = 1e-10;
  int checks = 0;
  while (checks < 10000) {
    for (const auto& m : models) {
      const Mat& P = m.P;
      const Mat h1 = random_invertible_masked(rng, m.levi, 100), h2 = random_invertible_masked(rng, m.levi, 100);
      const Mat k = random_invertible_masked(rng, m.levi, 100);
      const Mat M1 = h1 * P, M2 = h2 * P;
      auto in_h = [&](const Mat& x) { return off_mask_norm(x, m.levi) <= tol * x.norm(); };
      out.require(in_twist_coset(M1, m.levi, P, tol), "member");
      out.require(in_twist_coset(k * M1, m.levi, P, tol), "left closure");
      out.require(in_twist_coset(M1 * k, m.levi, P, tol), "right closure");
      out.require(in_h(M1 * M2.inverse()), "M1 M2^-1 in H");
      out.require(in_h(M2.inverse() * M1), "M2^-1 M1 in phi(H) = H");
      out.require(in_twist_coset((M1 * M2.inverse()) * M2, m.levi, P, tol), "left H factor recovers M1");
      checks += 6;
    }
  }
  out.detail << checks << " checks over " << models.size() << " cosets, tol " << tol;
}

// Criterion 8
void one_level(Outcome& out) {
  int checked = 0;
  std::ostringstream names;
  for (const auto& name : list_presets()) {
    const auto model = FissionModel::from_class(load_preset(name));
    std::set<Rational> levels;
    for (const auto& d : model.stokes.directions) levels.insert(d.levels.begin(), d.levels.end());
    if (levels.size() != 1) continue;
    const auto r = parabolic_span_check(model);
    out.require(r.ok(), name + ": parabolic span");
    out.require(r.periodic, name + ": periodicity over a full turn");
    names << name << " (l=" << r.half << ") ";
    ++checked;
  }
  out.require(checked >= 8, "all one-level presets found");
  out.detail << checked << " presets: " << names.str();
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, std::function<void(Outcome&)>, double>> criteria{
      {1, "Airy cover, apples and singular directions", airy, 1.0},
      {2, "cube-root cover, apples and singular directions", cuberoot, 0},
      {3, "p1h family: directions, Stokes blocks, H and H(d)", family, 0},
      {4, "untwisting oracle on 50 random classes", untwisting, 60.0},
      {5, "axiom suite on five presets", axioms, 300.0},
      {6, "fusion and twisted doubles", fusion, 0},
      {7, "H(d) coset closure and quotients", cosets, 0},
      {8, "one-level parabolic structure", one_level, 0},
  };
  bool all = true;
  for (const auto& [id, title, run, limit] : criteria) {
    Outcome out;
    const auto start = Clock::now();
    try {
      run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double t = seconds_since(start);
    if (limit > 0) out.require(t < limit, "runtime limit");
    all = all && out.pass;
    std::printf("criterion %d %s: %s [%s] (%.2f s)\n", id, out.pass ? "PASS" : "FAIL", title.c_str(),
                out.detail.str().c_str(), t);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
