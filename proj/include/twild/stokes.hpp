#pragma once

// Stokes combinatorics of a GL_N irregular class: branches, the adjoint
// cover, singular directions with their root pairs, the Levi H and the
// formal monodromy coset H(d), and the untwisting cross-check.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twild/irregular_class.hpp"

namespace twild {

struct Branch {
  Exponent q;
  std::int64_t block;   // multiplicity of the circle
  std::size_t circle;   // index into IrregularClass::entries()
  std::int64_t sheet;   // position in the Galois orbit
};

/// Branches q_1..q_n in block order; sigma(i) is the continuation of q_i once
/// around the boundary in the positive sense.
struct BranchSystem {
  std::vector<Branch> branches;
  std::vector<std::size_t> sigma;
  std::vector<std::int64_t> offsets;  // first matrix row of each block
  std::int64_t N = 0;
};

BranchSystem branches(const IrregularClass& Q);

struct CoverEntry {
  CircleClass circle;
  std::int64_t mult;
};

/// Circles of q_i - q_j over all ordered pairs (including i = j), with
/// multiplicities normalized so that sum of mult * ram equals N^2.
std::vector<CoverEntry> adjoint_cover(const IrregularClass& Q);

/// Sum of ram over the distinct circles of a cover.
std::int64_t cover_degree(const std::vector<CoverEntry>& cover);

/// Ordered branch pair (i, j): the (i, j) block of End(V), graded by q_i - q_j.
struct Root {
  std::size_t i;
  std::size_t j;
  Rational level;
  friend bool operator==(const Root& a, const Root& b) { return a.i == b.i && a.j == b.j; }
};

struct SingularDirection {
  Direction d;
  std::vector<Root> roots;     // sorted by (i, j)
  std::int64_t dim = 0;        // sum of block(i) * block(j)
  std::vector<Rational> levels;  // ascending, distinct
};

struct FormalGroup {
  std::vector<std::int64_t> blocks;  // block size per branch
  std::vector<std::int64_t> offsets;
  std::vector<std::size_t> sigma;
  std::int64_t N = 0;

  std::int64_t dim_levi() const;
  /// Block permutation with identity blocks at (sigma(i), i).
  Eigen::MatrixXcd permutation() const;
  /// Matrix with ones on every block of H (the diagonal blocks).
  Eigen::MatrixXi levi_mask() const;
};

struct StokesStructure {
  Mode mode = Mode::Exact;
  BranchSystem system;
  std::vector<SingularDirection> directions;  // ascending angle from the basepoint
  FormalGroup formal;
};

FormalGroup formal_group(const BranchSystem& bs);
FormalGroup formal_group(const IrregularClass& Q);

/// Directions in [0, 1) turns; the basepoint sits just before angle 0, so a
/// direction at angle 0 is the first one.
StokesStructure singular_directions(const BranchSystem& bs);
StokesStructure singular_directions(const IrregularClass& Q);

/// Roots at direction `index` grouped by level, ascending.  Throws
/// std::out_of_range for an unknown direction.
std::vector<std::pair<Rational, std::vector<Root>>> level_filtration(const StokesStructure& S, std::size_t index);
std::vector<std::pair<Rational, std::vector<Root>>> level_filtration(const StokesStructure& S, const Direction& d);

/// Index of the direction at the same angle as d, if any.
std::optional<std::size_t> find_direction(const StokesStructure& S, const Direction& d);

struct SheetMatch {
  Direction lifted;
  std::int64_t dim = 0;
  std::int64_t base_dim = 0;
  bool match = false;
};

struct UntwistReport {
  std::int64_t r = 1;
  BranchSystem lifted;  // branches q_i(w^r), all unramified, sigma = id
  StokesStructure base;
  StokesStructure lifted_structure;
  std::vector<SheetMatch> first_sheet;
  bool count_ok = false;      // |A'| = r |A|
  bool preimage_ok = false;   // A' = pi^{-1}(A)
  bool first_sheet_ok = false;
  bool ok() const { return count_ok && preimage_ok && first_sheet_ok; }
};

UntwistReport untwist(const IrregularClass& Q);

/// Q'(zeta w) = P^{-1} Q'(w) P for the lifted diagonal Q'(w) = diag q_i(w^r),
/// i.e. q_i(w^r) continued by zeta equals q_{sigma(i)}(w^r).  A custom sigma
/// may be supplied to test corrupted permutations.
bool check_descent(const BranchSystem& bs, const std::vector<std::size_t>& sigma);
bool check_descent(const IrregularClass& Q);

}  // namespace twild
