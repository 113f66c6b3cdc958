#pragma once

// Model descriptors and seeded sweeps of the quasi-Hamiltonian axiom suite.
//
// Descriptors:
//   <preset>                      e.g. "airy", "p1h n=2 k=3" (presets/<name>.json)
//   file:<path>                   an irregular class or surface JSON file
//   double:<phi>,<psi>[:n=<N>]    internally fused double; phi, psi in id|inner|outer
//   fuse:<a>+<b>                  A(Q) fused with A(Q') for two class descriptors
//   surface:g=<g>:<class>[,<class>...][:twists=<phi>,<psi>,...]

#include <cstdint>
#include <string>
#include <vector>

#include "twild/serialize.hpp"

namespace twild {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& text);

/// "p1h n=2 k=3" -> "p1h_n2_k3"; other names are lowercased with spaces as '_'.
std::string preset_key(const std::string& name);
std::string preset_path(const std::string& name);
IrregularClass load_preset(const std::string& name);
/// Sorted preset keys found in the preset directory.
std::vector<std::string> list_presets();

struct Model {
  std::string descriptor;
  std::string canonical;  // hashed; includes file contents for file: descriptors
  SpacePtr space;
  bool corrupted = false;
};

/// Throws ParseError on a malformed or unknown descriptor.  Random twist
/// matrices are drawn from a generator seeded by the descriptor hash.
Model build_model(const std::string& descriptor, bool corrupt = false);

struct Thresholds {
  double qh = 1e-6;
  double equivariance = 1e-10;
  double invariance = 1e-9;
  int kernel = 0;
};

struct VerifyOptions {
  int seeds = 100;
  int workers = 1;
  std::uint64_t base_seed = 0;
  Thresholds thresholds;
  bool overridden = false;  // thresholds differ from the defaults
};

struct Stat {
  double max = 0;
  double mean = 0;
  std::size_t worst_seed = 0;
};

struct SeedResult {
  double qh1 = 0, qh2 = 0, equivariance = 0, invariance = 0;
  // residuals divided by max(1, |μ*χ|) and max(1, |ω(v_X, u)|); diagnostic only
  double qh1_relative = 0, qh2_relative = 0;
  int kernel = 0, rank_omega = 0;
};

struct VerifyReport {
  Model model;
  VerifyOptions options;
  std::vector<SeedResult> per_seed;
  Stat qh1, qh2, equivariance, invariance, qh1_relative, qh2_relative;
  int kernel_max = 0;
  int rank_omega_min = 0;
  int dimension = 0;
  bool pass = false;
  std::vector<std::string> failures;
  double seconds = 0;
};

/// Tangents and the Lie algebra element are normalized to unit norm; seed k uses base_seed + k mixed
/// with the model hash, so reports are reproducible for any worker count.
SeedResult evaluate_seed(const QHSpace& M, std::uint64_t seed);

VerifyReport verify(const Model& model, const VerifyOptions& options);
Json to_json(const VerifyReport& r);

}  // namespace twild
