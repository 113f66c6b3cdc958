#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "twild/stokes.hpp"

using namespace twild;
using oracle::power;
using oracle::single;

namespace {

IrregularClass two_level() {
  return IrregularClass({{CircleClass(power(2, 1)), 1}, {CircleClass(power(1, 1)), 1}, {CircleClass(Exponent{}), 1}});
}

IrregularClass airy() { return single(power(3, 2, 2), 1); }

// The library and the floating-point oracle must agree on every direction.
void check_against_oracle(const IrregularClass& Q) {
  const auto S = singular_directions(Q);
  const auto ref = oracle::singular_directions(S.system);
  REQUIRE(S.directions.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    CHECK(std::abs(S.directions[k].d.turns - ref[k].turns) < 1e-9);
    CHECK(S.directions[k].dim == ref[k].dim);
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const auto& r : S.directions[k].roots) got.insert({r.i, r.j});
    CHECK(got == ref[k].roots);
  }
}

IrregularClass random_class(std::mt19937_64& rng, std::int64_t max_rank) {
  for (;;) {
    std::vector<ClassEntry> entries;
    std::int64_t rank = 0;
    const int circles = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < circles; ++c) {
      const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 4);
      const std::int64_t mult = 1 + static_cast<std::int64_t>(rng() % 2);
      if (rank + r * mult > max_rank) break;
      std::int64_t k = 1 + static_cast<std::int64_t>(rng() % (2 * r));
      while (std::gcd(k, r) != 1) ++k;
      std::vector<RawTerm> raw{{Rational(k, r), Coefficient::integer(1 + static_cast<std::int64_t>(rng() % 3))}};
      if (rng() % 2) raw.push_back({Rational(1, r), Coefficient(Cyclo::root_of_unity(4, static_cast<std::int64_t>(rng() % 4)))});
      entries.push_back({CircleClass(normalize(raw)), mult});
      rank += r * mult;
    }
    if (entries.empty()) continue;
    try {
      return IrregularClass(entries);
    } catch (const std::invalid_argument&) {
    }
  }
}

}  // namespace

TEST_CASE("irregular class validation") {
  CHECK_THROWS_AS(single(power(1, 2), 0), std::invalid_argument);
  CHECK_THROWS_AS(IrregularClass({{CircleClass(power(1, 3)), 1}, {CircleClass(galois_orbit(power(1, 3))[1]), 1}}),
                  std::invalid_argument);
  CHECK(single(power(3, 2), 2).rank() == 4);
}

TEST_CASE("branches") {
  SUBCASE("<z^(-k/2)> mult n: two branches, sigma swaps") {
    const auto bs = branches(single(power(3, 2), 2));
    REQUIRE(bs.branches.size() == 2);
    CHECK(bs.branches[0].block == 2);
    CHECK(bs.branches[1].q == -bs.branches[0].q);
    CHECK(bs.sigma == std::vector<std::size_t>{1, 0});
    CHECK(bs.N == 4);
  }
  SUBCASE("<z^(-1/3)>: a 3-cycle") {
    const auto bs = branches(single(power(1, 3), 1));
    CHECK(bs.sigma == std::vector<std::size_t>{1, 2, 0});
  }
  SUBCASE("<z^(-2)> mult 2: one block") {
    const auto bs = branches(single(power(2, 1), 2));
    REQUIRE(bs.branches.size() == 1);
    CHECK(bs.branches[0].block == 2);
    CHECK(bs.sigma == std::vector<std::size_t>{0});
  }
  SUBCASE("sigma gives the next Galois translate") {
    const auto bs = branches(IrregularClass({{CircleClass(power(2, 3)), 1}, {CircleClass(power(1, 2, 3)), 2}}));
    for (std::size_t i = 0; i < bs.branches.size(); ++i) {
      const auto& q = bs.branches[i].q;
      const auto cont = q.evaluate(1.0, 0.4 + 2 * oracle::kPi);
      CHECK(std::abs(bs.branches[bs.sigma[i]].q.evaluate(1.0, 0.4) - cont) < 1e-9);
    }
  }
}

TEST_CASE("adjoint cover") {
  SUBCASE("Airy: <0> and <4 z^(-3/2)>, degree 3") {
    const auto cover = adjoint_cover(airy());
    REQUIRE(cover.size() == 2);
    CHECK(cover[0].circle.representative().is_zero());
    CHECK(same_circle(cover[1].circle.representative(), power(3, 2, 4)));
    CHECK(cover_degree(cover) == 3);
  }
  SUBCASE("cube root: degree 7") {
    const auto cover = adjoint_cover(single(power(1, 3), 1));
    CHECK(cover_degree(cover) == 7);
    CHECK(cover[0].mult == 3);
  }
  SUBCASE("<z^(-2)> mult 2: <0> with multiplicity 4") {
    const auto cover = adjoint_cover(single(power(2, 1), 2));
    REQUIRE(cover.size() == 1);
    CHECK(cover[0].mult == 4);
  }
  SUBCASE("rank conservation and apple count on random classes") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      const auto Q = random_class(rng, 6);
      std::int64_t n = 0;
      for (const auto& e : Q.entries()) n += e.mult * e.circle.ram();
      CHECK(n == Q.rank());
      const auto cover = adjoint_cover(Q);
      std::int64_t sq = 0, apple_dim = 0;
      for (const auto& c : cover) {
        sq += c.mult * c.circle.ram();
        if (!c.circle.representative().is_zero()) apple_dim += c.mult * c.circle.deg();
      }
      CHECK(sq == Q.rank() * Q.rank());
      std::int64_t dims = 0;
      for (const auto& d : singular_directions(Q).directions) dims += d.dim;
      CHECK(dims == apple_dim);
    }
  }
}

TEST_CASE("singular directions agree with the floating-point oracle") {
  check_against_oracle(airy());
  check_against_oracle(single(power(1, 3), 1));
  check_against_oracle(two_level());
  for (std::int64_t k : {1, 3, 5})
    for (std::int64_t n : {1, 2}) check_against_oracle(single(power(k, 2), n));
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) check_against_oracle(random_class(rng, 6));
}

TEST_CASE("singular direction examples") {
  const auto A = singular_directions(airy());
  REQUIRE(A.directions.size() == 3);
  for (const auto& d : A.directions) {
    CHECK(d.dim == 1);
    CHECK(d.levels == std::vector<Rational>{Rational(3, 2)});
  }
  const auto C = singular_directions(single(power(1, 3), 1));
  REQUIRE(C.directions.size() == 2);
  CHECK(C.directions[0].dim == 1);
  CHECK(C.directions[1].dim == 1);

  for (std::int64_t k : {1, 3, 5}) {
    for (std::int64_t n : {1, 2}) {
      const auto S = singular_directions(single(power(k, 2), n));
      REQUIRE(static_cast<std::int64_t>(S.directions.size()) == k);
      for (std::size_t d = 0; d < S.directions.size(); ++d) {
        REQUIRE(S.directions[d].roots.size() == 1);
        CHECK(S.directions[d].dim == n * n);
        // upper and lower blocks alternate
        if (d > 0) CHECK(S.directions[d].roots[0].i == S.directions[d - 1].roots[0].j);
      }
    }
  }
}

TEST_CASE("level filtration") {
  const auto A = singular_directions(airy());
  for (std::size_t d = 0; d < A.directions.size(); ++d) {
    const auto f = level_filtration(A, d);
    REQUIRE(f.size() == 1);
    CHECK(f[0].first == Rational(3, 2));
  }
  CHECK_THROWS_AS(level_filtration(A, 7), std::out_of_range);

  // brute force: the levels present at each direction are those of the root pairs landing there
  const auto T = singular_directions(two_level());
  bool shared = false;
  for (std::size_t d = 0; d < T.directions.size(); ++d) {
    const auto f = level_filtration(T, d);
    std::set<Rational> expect;
    for (const auto& r : T.directions[d].roots) expect.insert(degree_level(difference(T.system.branches[r.i].q, T.system.branches[r.j].q)).level);
    std::set<Rational> got;
    std::size_t total = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      got.insert(f[k].first);
      total += f[k].second.size();
      if (k > 0) CHECK(f[k - 1].first < f[k].first);
    }
    CHECK(got == expect);
    CHECK(total == T.directions[d].roots.size());
    shared = shared || f.size() == 2;
  }
  CHECK(shared);  // z^-2 - z^-1 and z^-1 - 0 meet at angle 1/2
}

TEST_CASE("formal group and the torus oracle") {
  auto check = [](const IrregularClass& Q) {
    const auto F = formal_group(Q);
    const Mat P = F.permutation();
    const auto basis = oracle::torus_coset_basis(P, F.blocks);
    CHECK(static_cast<std::int64_t>(basis.size()) == F.dim_levi());
    const Mask mask = F.levi_mask();
    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd;
    Mat M = Mat::Zero(F.N, F.N);
    for (const auto& B : basis) M += std::complex<double>(nd(rng), nd(rng)) * B;
    CHECK(in_twist_coset(M, mask, P));
    for (const auto& B : basis) CHECK(off_mask_norm(B * P.inverse(), mask) < 1e-12);
  };
  check(single(power(1, 3), 1));
  check(single(power(3, 2), 2));
  check(single(power(2, 1), 2));
  check(two_level());
  check(IrregularClass({{CircleClass(power(1, 2)), 2}, {CircleClass(power(1, 3, 2)), 1}}));

  const auto F = formal_group(single(power(3, 2), 2));
  CHECK(F.blocks == std::vector<std::int64_t>{2, 2});
  CHECK(F.dim_levi() == 8);
  const Mat P = F.permutation();
  CHECK(P.topLeftCorner(2, 2).norm() == 0);
  CHECK(P.bottomRightCorner(2, 2).norm() == 0);
  CHECK((P.topRightCorner(2, 2) - Mat::Identity(2, 2)).norm() == 0);
  CHECK(formal_group(single(power(2, 1), 2)).permutation() == Mat::Identity(2, 2));
}

TEST_CASE("untwisting") {
  const auto a = untwist(airy());
  CHECK(a.r == 2);
  CHECK(a.lifted_structure.directions.size() == 6);
  CHECK(a.ok());
  const auto c = untwist(single(power(1, 3), 1));
  CHECK(c.r == 3);
  CHECK(c.lifted_structure.directions.size() == 6);
  CHECK(c.ok());
  const auto u = untwist(two_level());
  CHECK(u.r == 1);
  CHECK(u.lifted_structure.directions.size() == u.base.directions.size());
  CHECK(u.ok());
  for (const auto& b : a.lifted.branches) CHECK(ramification(b.q) == 1);
}

TEST_CASE("check_descent") {
  for (std::int64_t k : {1, 3, 5})
    for (std::int64_t n : {1, 2}) CHECK(check_descent(single(power(k, 2), n)));
  CHECK(check_descent(two_level()));
  const auto bs = branches(single(power(1, 3), 1));
  CHECK(check_descent(bs, bs.sigma));
  CHECK_FALSE(check_descent(bs, {2, 0, 1}));
  CHECK_FALSE(check_descent(bs, {0, 1, 2}));
}
