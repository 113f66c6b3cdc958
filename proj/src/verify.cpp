#include "twild/verify.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <regex>
#include <sstream>

namespace twild {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

int parse_count(const std::string& text, const std::string& what) {
  int value = 0;
  const auto t = trim(text);
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || value < 0)
    throw ParseError("descriptor", what + " must be a nonnegative integer, got \"" + text + "\"");
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

fs::path preset_dir() {
  if (const char* env = std::getenv("TWILD_PRESETS")) return env;
  return TWILD_PRESET_DIR;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Twist matrices are model parameters; a bounded condition number keeps the
// residuals at the scale of the points rather than of the twist.
constexpr double kTwistMaxCond = 10;

Automorphism twist_tag(const std::string& tag, Eigen::Index n, Rng& rng, const std::string& where) {
  if (tag == "id") return Automorphism::identity(n);
  if (tag == "inner") return Automorphism::inner(random_invertible(rng, n, kTwistMaxCond));
  if (tag == "outer") return Automorphism::outer(random_invertible(rng, n, kTwistMaxCond));
  throw ParseError(where, "unknown twist \"" + tag + "\" (id, inner or outer)");
}

struct ClassSource {
  IrregularClass Q;
  std::string canonical;
};

ClassSource class_source(const std::string& desc) {
  if (desc.rfind("file:", 0) == 0) {
    const auto path = desc.substr(5);
    const auto text = slurp(path);
    Json j;
    try {
      j = parse_json_text(text);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.where(), "JSON syntax error");
    }
    return {class_from_json(j), "file:" + j.dump()};
  }
  return {load_preset(desc), "preset:" + preset_key(desc)};
}

}  // namespace

std::string preset_key(const std::string& name) {
  static const std::regex family(R"(^\s*p1h\s+n\s*=\s*(\d+)\s+k\s*=\s*(\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(name, m, family)) return "p1h_n" + m[1].str() + "_k" + m[2].str();
  std::string key = trim(name);
  for (auto& c : key) c = c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return key;
}

std::string preset_path(const std::string& name) { return (preset_dir() / (preset_key(name) + ".json")).string(); }

IrregularClass load_preset(const std::string& name) {
  const auto path = preset_path(name);
  if (!fs::exists(path)) throw ParseError("preset", "unknown preset \"" + name + "\"");
  return class_from_json(read_json_file(path));
}

std::vector<std::string> list_presets() {
  std::vector<std::string> out;
  if (!fs::is_directory(preset_dir())) return out;
  for (const auto& e : fs::directory_iterator(preset_dir()))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

Model build_model(const std::string& descriptor, bool corrupt) {
  Model m;
  m.descriptor = descriptor;
  m.corrupted = corrupt;
  const auto d = trim(descriptor);
  auto fission = [corrupt](const IrregularClass& Q) {
    return std::make_shared<FissionSpace>(FissionModel::from_class(Q), GammaBar::First, corrupt);
  };

  if (d.rfind("double:", 0) == 0) {
    if (corrupt) throw ParseError("descriptor", "corruption applies to models built from A(Q)");
    const auto parts = split(d.substr(7), ':');
    const auto tags = split(parts.at(0), ',');
    if (tags.size() != 2) throw ParseError("descriptor", "expected double:<phi>,<psi>");
    Eigen::Index n = 2;
    if (parts.size() > 1) {
      if (parts[1].rfind("n=", 0) != 0) throw ParseError("descriptor", "expected n=<rank>");
      n = parse_count(parts[1].substr(2), "rank");
      if (n < 1) throw ParseError("descriptor", "rank must be positive");
    }
    m.canonical = "double:" + tags[0] + "," + tags[1] + ":n=" + std::to_string(n);
    Rng rng(fnv1a(m.canonical));
    const auto phi = twist_tag(tags[0], n, rng, "descriptor");
    const auto psi = twist_tag(tags[1], n, rng, "descriptor");
    m.space = internally_fused_double(phi, psi);
    return m;
  }
  if (d.rfind("fuse:", 0) == 0) {
    const auto parts = split(d.substr(5), '+');
    if (parts.size() < 2) throw ParseError("descriptor", "expected fuse:<a>+<b>");
    SpacePtr acc;
    m.canonical = "fuse";
    for (const auto& p : parts) {
      auto src = class_source(p);
      m.canonical += ":" + src.canonical;
      SpacePtr s = fission(src.Q);
      try {
        acc = acc ? fuse(acc, s) : s;
      } catch (const std::invalid_argument& e) {
        throw ParseError("descriptor", e.what());
      }
    }
    m.space = acc;
    return m;
  }
  if (d.rfind("surface:", 0) == 0) {
    if (corrupt) throw ParseError("descriptor", "corruption applies to models built from A(Q)");
    const auto parts = split(d.substr(8), ':');
    if (parts.size() < 2 || parts[0].rfind("g=", 0) != 0)
      throw ParseError("descriptor", "expected surface:g=<genus>:<class>[,<class>...]");
    SurfaceData S;
    S.genus = parse_count(parts[0].substr(2), "genus");
    m.canonical = "surface:g=" + std::to_string(S.genus);
    for (const auto& c : split(parts[1], ',')) {
      auto src = class_source(c);
      m.canonical += ":" + src.canonical;
      S.boundary.push_back(src.Q);
    }
    std::vector<std::string> tags;
    if (parts.size() > 2) {
      if (parts[2].rfind("twists=", 0) != 0) throw ParseError("descriptor", "expected twists=<phi>,<psi>,...");
      tags = split(parts[2].substr(7), ',');
      if (static_cast<int>(tags.size()) > 2 * S.genus) throw ParseError("descriptor", "too many twists");
      m.canonical += ":" + parts[2];
    }
    Rng rng(fnv1a(m.canonical));
    for (const auto& t : tags) S.twists.push_back(twist_tag(t, S.rank(), rng, "descriptor"));
    try {
      m.space = assemble(S).space;
    } catch (const std::invalid_argument& e) {
      throw ParseError("descriptor", e.what());
    }
    return m;
  }
  auto src = class_source(d);
  m.canonical = src.canonical;
  m.space = fission(src.Q);
  return m;
}

SeedResult evaluate_seed(const QHSpace& M, std::uint64_t seed) {
  Rng rng(seed);
  auto unit = [](Tangent u) {
    const double n = norm(u);
    if (n > 0)
      for (auto& x : u) x /= n;
    return u;
  };
  const auto p = M.sample(rng);
  const auto u = unit(M.random_tangent(rng));
  const auto v = unit(M.random_tangent(rng));
  const auto w = unit(M.random_tangent(rng));
  auto x = M.random_lie(rng);
  double xn = 0;
  for (const auto& a : x) xn += a.squaredNorm();
  if (xn > 0)
    for (auto& a : x) a /= std::sqrt(xn);
  const auto g = M.random_group_element(rng);
  SeedResult r;
  r.qh1 = qh1_residual(M, p, u, v, w);
  r.qh2 = qh2_residual(M, p, x, u);
  r.qh1_relative = r.qh1 / std::max(1.0, std::abs(cartan_three_form(M, p, u, v, w)));
  r.qh2_relative = r.qh2 / std::max(1.0, std::abs(M.omega(p, M.fundamental(p, x), u)));
  r.equivariance = equivariance_residual(M, p, g);
  r.invariance = invariance_residual(M, p, g, u, v);
  const auto k = qh3_kernel(M, p);
  r.kernel = k.kernel();
  r.rank_omega = k.rank_omega;
  return r;
}

VerifyReport verify(const Model& model, const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.model = model;
  rep.options = options;
  rep.dimension = static_cast<int>(model.space->dimension());
  const auto n = static_cast<std::size_t>(std::max(options.seeds, 0));
  rep.per_seed.resize(n);
  const std::uint64_t h = fnv1a(model.canonical);
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(std::max<std::size_t>(n, 1))));

  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = static_cast<std::size_t>(w); k < n; k += static_cast<std::size_t>(workers))
        rep.per_seed[k] = evaluate_seed(*model.space, splitmix(h ^ splitmix(options.base_seed + k)));
    }));
  for (auto& j : jobs) j.get();

  auto stat = [&](double SeedResult::*f) {
    Stat s;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = rep.per_seed[k].*f;
      s.mean += x;
      if (x > s.max || k == 0) {
        s.max = x;
        s.worst_seed = k;
      }
    }
    if (n > 0) s.mean /= static_cast<double>(n);
    return s;
  };
  rep.qh1 = stat(&SeedResult::qh1);
  rep.qh2 = stat(&SeedResult::qh2);
  rep.equivariance = stat(&SeedResult::equivariance);
  rep.invariance = stat(&SeedResult::invariance);
  rep.qh1_relative = stat(&SeedResult::qh1_relative);
  rep.qh2_relative = stat(&SeedResult::qh2_relative);
  rep.rank_omega_min = rep.dimension;
  for (const auto& r : rep.per_seed) {
    rep.kernel_max = std::max(rep.kernel_max, r.kernel);
    rep.rank_omega_min = std::min(rep.rank_omega_min, r.rank_omega);
  }

  const auto& t = options.thresholds;
  if (n == 0) rep.failures.push_back("no seeds");
  if (!(rep.qh1.max < t.qh)) rep.failures.push_back("qh1");
  if (!(rep.qh2.max < t.qh)) rep.failures.push_back("qh2");
  if (!(rep.equivariance.max < t.equivariance)) rep.failures.push_back("equivariance");
  if (!(rep.invariance.max < t.invariance)) rep.failures.push_back("invariance");
  if (rep.kernel_max > t.kernel) rep.failures.push_back("qh3");
  rep.pass = rep.failures.empty();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

Json to_json(const VerifyReport& r) {
  auto stat = [](const Stat& s) { return Json{{"max", s.max}, {"mean", s.mean}, {"worst_seed", s.worst_seed}}; };
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(r.model.canonical)));
  const auto& t = r.options.thresholds;
  Json out;
  out["descriptor"] = r.model.descriptor;
  out["model_hash"] = hash;
  out["space"] = r.model.space->name();
  out["dimension"] = r.dimension;
  out["seeds"] = r.options.seeds;
  out["base_seed"] = r.options.base_seed;
  out["workers"] = r.options.workers;
  out["thresholds"] = {{"qh", t.qh},
                       {"equivariance", t.equivariance},
                       {"invariance", t.invariance},
                       {"qh3_kernel", t.kernel},
                       {"overridden", r.options.overridden}};
  out["residuals"] = {{"qh1", stat(r.qh1)},
                      {"qh2", stat(r.qh2)},
                      {"equivariance", stat(r.equivariance)},
                      {"invariance", stat(r.invariance)}};
  out["relative"] = {{"qh1", stat(r.qh1_relative)}, {"qh2", stat(r.qh2_relative)}};
  out["qh3"] = {{"kernel_max", r.kernel_max}, {"rank_omega_min", r.rank_omega_min}};
  out["corrupted"] = r.model.corrupted;
  if (r.model.corrupted) out["negative_control"] = "the eta term of the two-form is sign-flipped; failure is expected";
  out["pass"] = r.pass;
  out["failures"] = r.failures;
  return out;
}

}  // namespace twild
