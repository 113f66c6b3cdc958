#include "twild/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace twild {

BranchSystem branches(const IrregularClass& Q) {
  BranchSystem bs;
  for (std::size_t c = 0; c < Q.entries().size(); ++c) {
    const auto& entry = Q.entries()[c];
    const auto orbit = galois_orbit(entry.circle.representative());
    const std::size_t base = bs.branches.size();
    const auto r = orbit.size();
    for (std::size_t j = 0; j < r; ++j) {
      bs.branches.push_back({orbit[j], entry.mult, c, static_cast<std::int64_t>(j)});
      bs.sigma.push_back(base + (j + 1) % r);
      bs.offsets.push_back(bs.N);
      bs.N += entry.mult;
    }
  }
  return bs;
}

std::vector<CoverEntry> adjoint_cover(const IrregularClass& Q) {
  const auto bs = branches(Q);
  std::vector<CoverEntry> weights;
  for (const auto& bi : bs.branches) {
    for (const auto& bj : bs.branches) {
      const auto d = difference(bi.q, bj.q);
      const auto w = bi.block * bj.block;
      auto it = std::find_if(weights.begin(), weights.end(),
                             [&](const CoverEntry& e) { return same_circle(e.circle.representative(), d); });
      if (it == weights.end())
        weights.push_back({CircleClass(d), w});
      else
        it->mult += w;
    }
  }
  for (auto& e : weights) {
    if (e.mult % e.circle.ram() != 0)
      throw std::logic_error("adjoint cover weight not divisible by ramification");
    e.mult /= e.circle.ram();
  }
  return weights;
}

std::int64_t cover_degree(const std::vector<CoverEntry>& cover) {
  std::int64_t total = 0;
  for (const auto& e : cover) total += e.circle.ram();
  return total;
}

std::int64_t FormalGroup::dim_levi() const {
  std::int64_t d = 0;
  for (auto n : blocks) d += n * n;
  return d;
}

Eigen::MatrixXcd FormalGroup::permutation() const {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    P.block(offsets[sigma[i]], offsets[i], blocks[i], blocks[i]).setIdentity();
  return P;
}

Eigen::MatrixXi FormalGroup::levi_mask() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(N, N);
  for (std::size_t i = 0; i < blocks.size(); ++i) m.block(offsets[i], offsets[i], blocks[i], blocks[i]).setOnes();
  return m;
}

FormalGroup formal_group(const BranchSystem& bs) {
  FormalGroup fg;
  for (const auto& b : bs.branches) fg.blocks.push_back(b.block);
  fg.offsets = bs.offsets;
  fg.sigma = bs.sigma;
  fg.N = bs.N;
  return fg;
}

FormalGroup formal_group(const IrregularClass& Q) { return formal_group(branches(Q)); }

namespace {

Mode system_mode(const BranchSystem& bs) {
  for (const auto& b : bs.branches)
    if (b.q.mode() == Mode::Numeric) return Mode::Numeric;
  return Mode::Exact;
}

void finish(SingularDirection& sd, const BranchSystem& bs) {
  std::sort(sd.roots.begin(), sd.roots.end(),
            [](const Root& a, const Root& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  sd.roots.erase(std::unique(sd.roots.begin(), sd.roots.end()), sd.roots.end());
  std::set<Rational> levels;
  sd.dim = 0;
  for (const auto& r : sd.roots) {
    sd.dim += bs.branches[r.i].block * bs.branches[r.j].block;
    levels.insert(r.level);
  }
  sd.levels.assign(levels.begin(), levels.end());
}

}  // namespace

StokesStructure singular_directions(const BranchSystem& bs) {
  std::vector<std::pair<Direction, Root>> records;
  const auto n = bs.branches.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto d = difference(bs.branches[i].q, bs.branches[j].q);
      if (d.is_zero()) continue;
      const auto level = degree_level(d).level;
      for (const auto& dir : apples_on_base_turn(d)) records.push_back({dir, Root{i, j, level}});
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.first.before(b.first); });

  StokesStructure S;
  S.mode = system_mode(bs);
  S.system = bs;
  S.formal = formal_group(bs);
  for (const auto& [dir, root] : records) {
    if (!S.directions.empty() && S.directions.back().d.same_angle(dir)) {
      S.directions.back().roots.push_back(root);
    } else {
      S.directions.push_back({dir, {root}, 0, {}});
    }
  }
  // numeric directions just below a full turn coincide with those at 0
  if (S.directions.size() > 1 && S.directions.back().d.same_angle(S.directions.front().d)) {
    auto& front = S.directions.front().roots;
    const auto& back = S.directions.back().roots;
    front.insert(front.end(), back.begin(), back.end());
    S.directions.pop_back();
  }
  for (auto& sd : S.directions) finish(sd, bs);
  return S;
}

StokesStructure singular_directions(const IrregularClass& Q) { return singular_directions(branches(Q)); }

std::vector<std::pair<Rational, std::vector<Root>>> level_filtration(const StokesStructure& S, std::size_t index) {
  if (index >= S.directions.size())
    throw std::out_of_range("direction index " + std::to_string(index) + " out of range");
  std::map<Rational, std::vector<Root>> buckets;
  for (const auto& r : S.directions[index].roots) buckets[r.level].push_back(r);
  return {buckets.begin(), buckets.end()};
}

std::optional<std::size_t> find_direction(const StokesStructure& S, const Direction& d) {
  for (std::size_t k = 0; k < S.directions.size(); ++k)
    if (S.directions[k].d.same_angle(d)) return k;
  return std::nullopt;
}

std::vector<std::pair<Rational, std::vector<Root>>> level_filtration(const StokesStructure& S, const Direction& d) {
  const auto k = find_direction(S, d);
  if (!k) throw std::out_of_range("not a singular direction");
  return level_filtration(S, *k);
}

namespace {

Direction scaled(const Direction& d, std::int64_t num, std::int64_t den, std::int64_t shift) {
  // (num * d + shift) / den, reduced mod 1
  Direction out;
  if (d.exact) {
    out.exact = frac((*d.exact * Rational(num) + Rational(shift)) / Rational(den));
    out.turns = to_double(*out.exact);
  } else {
    out.turns = std::fmod((d.turns * static_cast<double>(num) + static_cast<double>(shift)) / static_cast<double>(den),
                          1.0);
  }
  return out;
}

bool first_sheet(const Direction& d, std::int64_t r) {
  if (d.exact) return *d.exact < Rational(1, r);
  return d.turns < 1.0 / static_cast<double>(r) - 1e-12;
}

}  // namespace

UntwistReport untwist(const IrregularClass& Q) {
  UntwistReport rep;
  const auto bs = branches(Q);
  for (const auto& e : Q.entries()) rep.r = lcm64(rep.r, e.circle.ram());

  rep.lifted = bs;
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    rep.lifted.branches[i].q = bs.branches[i].q.pullback(rep.r);
    rep.lifted.sigma[i] = i;
  }
  rep.base = singular_directions(bs);
  rep.lifted_structure = singular_directions(rep.lifted);

  const auto& A = rep.base.directions;
  const auto& A1 = rep.lifted_structure.directions;
  rep.count_ok = A1.size() == static_cast<std::size_t>(rep.r) * A.size();

  rep.preimage_ok = true;
  for (const auto& sd : A1)
    if (!find_direction(rep.base, scaled(sd.d, rep.r, 1, 0))) rep.preimage_ok = false;
  for (const auto& sd : A)
    for (std::int64_t m = 0; m < rep.r; ++m)
      if (!find_direction(rep.lifted_structure, scaled(sd.d, 1, rep.r, m))) rep.preimage_ok = false;

  rep.first_sheet_ok = true;
  std::size_t on_sheet = 0;
  for (const auto& sd : A1) {
    if (!first_sheet(sd.d, rep.r)) continue;
    ++on_sheet;
    SheetMatch m;
    m.lifted = sd.d;
    m.dim = sd.dim;
    const auto k = find_direction(rep.base, scaled(sd.d, rep.r, 1, 0));
    if (k) {
      m.base_dim = A[*k].dim;
      m.match = m.dim == m.base_dim && sd.roots == A[*k].roots;
    }
    rep.first_sheet_ok = rep.first_sheet_ok && m.match;
    rep.first_sheet.push_back(m);
  }
  rep.first_sheet_ok = rep.first_sheet_ok && on_sheet == A.size();
  return rep;
}

bool check_descent(const BranchSystem& bs, const std::vector<std::size_t>& sigma) {
  const auto n = bs.branches.size();
  if (sigma.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto s : sigma) {
    if (s >= n || seen[s]) return false;
    seen[s] = true;
  }
  std::int64_t r = 1;
  for (const auto& b : bs.branches) r = lcm64(r, ramification(b.q));
  for (std::size_t i = 0; i < n; ++i) {
    const auto lifted = bs.branches[i].q.pullback(r);
    std::vector<RawTerm> rotated;
    for (const auto& [E, c] : lifted.terms())
      rotated.emplace_back(E, c * Coefficient(Cyclo::root_of_unity(r, -E.numerator())));
    if (!(normalize(rotated) == bs.branches[sigma[i]].q.pullback(r))) return false;
  }
  return true;
}

bool check_descent(const IrregularClass& Q) {
  const auto bs = branches(Q);
  return check_descent(bs, bs.sigma);
}

}  // namespace twild
