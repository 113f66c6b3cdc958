#include "twild/serialize.hpp"

#include <fstream>
#include <sstream>

namespace twild {

namespace {

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw ParseError(path.empty() ? "(root)" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(child(path, key), "missing field");
  return *it;
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw ParseError(path, "expected an integer or a string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(path, std::string("bad rational: ") + e.what());
  }
}

std::int64_t integer_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::complex<double> complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(path, "expected a number or [re, im]");
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column), "JSON syntax error");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.where(), "JSON syntax error");
  }
}

Coefficient coefficient_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer() || j.is_string()) return Coefficient(Cyclo(rational_from_json(j, path)));
  if (!j.is_object()) throw ParseError(path, "expected a rational, cyclotomic or numeric coefficient");
  if (j.contains("re") || j.contains("im")) {
    const double re = j.value("re", 0.0), im = j.value("im", 0.0);
    return Coefficient(std::complex<double>(re, im));
  }
  if (j.contains("root_of_unity")) {
    const auto& r = j["root_of_unity"];
    const auto rp = child(path, "root_of_unity");
    if (!r.is_array() || r.size() != 2) throw ParseError(rp, "expected [m, k]");
    const auto m = integer_from_json(r[0], item(rp, 0));
    if (m <= 0) throw ParseError(item(rp, 0), "order must be positive");
    const auto k = integer_from_json(r[1], item(rp, 1));
    Cyclo c = Cyclo::root_of_unity(m, k);
    if (j.contains("scale")) c = Cyclo(rational_from_json(j["scale"], child(path, "scale"))) * c;
    return Coefficient(c);
  }
  const auto m = integer_from_json(field(j, path, "order"), child(path, "order"));
  if (m <= 0) throw ParseError(child(path, "order"), "order must be positive");
  const auto& cs = field(j, path, "coords");
  const auto cp = child(path, "coords");
  if (!cs.is_array() || static_cast<std::int64_t>(cs.size()) > m)
    throw ParseError(cp, "expected at most `order` coordinates");
  std::vector<Rational> coords;
  for (std::size_t k = 0; k < cs.size(); ++k) coords.push_back(rational_from_json(cs[k], item(cp, k)));
  return Coefficient(Cyclo(m, std::move(coords)));
}

Json to_json(const Coefficient& c) {
  if (c.mode() == Mode::Numeric) {
    const auto z = c.to_complex();
    return {{"re", z.real()}, {"im", z.imag()}};
  }
  const auto& x = c.exact();
  if (x.order() == 1) return to_string(x.coords().empty() ? Rational(0) : x.coords()[0]);
  Json coords = Json::array();
  for (const auto& r : x.coords()) coords.push_back(to_string(r));
  return {{"order", x.order()}, {"coords", coords}};
}

Exponent exponent_from_json(const Json& j, const std::string& path) {
  const auto& terms = field(j, path, "terms");
  const auto tp = child(path, "terms");
  if (!terms.is_array()) throw ParseError(tp, "expected an array");
  std::vector<RawTerm> raw;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto ip = item(tp, k);
    const auto power = rational_from_json(field(terms[k], ip, "power"), child(ip, "power"));
    if (power.numerator() <= 0) throw ParseError(child(ip, "power"), "powers must be positive");
    raw.emplace_back(power, coefficient_from_json(field(terms[k], ip, "coeff"), child(ip, "coeff")));
  }
  try {
    return normalize(raw);
  } catch (const std::exception& e) {
    throw ParseError(tp, e.what());
  }
}

Json to_json(const Exponent& q) {
  Json terms = Json::array();
  for (const auto& [e, a] : q.terms()) terms.push_back({{"power", to_string(e)}, {"coeff", to_json(a)}});
  return {{"terms", terms}, {"text", to_string(q)}};
}

IrregularClass class_from_json(const Json& j, const std::string& path) {
  const auto& circles = field(j, path, "circles");
  const auto cp = child(path, "circles");
  if (!circles.is_array() || circles.empty()) throw ParseError(cp, "expected a non-empty array");
  std::vector<ClassEntry> entries;
  for (std::size_t k = 0; k < circles.size(); ++k) {
    const auto ip = item(cp, k);
    const auto q = exponent_from_json(field(circles[k], ip, "exponent"), child(ip, "exponent"));
    const auto mult = integer_from_json(field(circles[k], ip, "mult"), child(ip, "mult"));
    if (mult <= 0) throw ParseError(child(ip, "mult"), "multiplicity must be positive");
    entries.push_back({CircleClass(q), mult});
  }
  std::string twist = "id";
  if (j.contains("twist")) {
    if (!j["twist"].is_string()) throw ParseError(child(path, "twist"), "expected a string");
    twist = j["twist"].get<std::string>();
  }
  try {
    return IrregularClass(std::move(entries), twist);
  } catch (const std::exception& e) {
    throw ParseError(cp, e.what());
  }
}

Json to_json(const IrregularClass& Q) {
  Json circles = Json::array();
  for (const auto& e : Q.entries()) circles.push_back({{"exponent", to_json(e.circle.representative())}, {"mult", e.mult}});
  return {{"twist", Q.twist()}, {"circles", circles}};
}

Mat matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError(path, "expected an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j[0].size());
  Mat out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto rp = item(path, static_cast<std::size_t>(r));
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != m) throw ParseError(rp, "ragged row");
    for (Eigen::Index c = 0; c < m; ++c) out(r, c) = complex_from_json(j[r][c], item(rp, static_cast<std::size_t>(c)));
  }
  return out;
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Automorphism automorphism_from_json(const Json& j, Eigen::Index n, const std::string& path) {
  if (j.is_string()) {
    const auto tag = j.get<std::string>();
    if (tag == "id") return Automorphism::identity(n);
    if (tag == "transpose") return Automorphism::outer(Mat::Identity(n, n));
    throw ParseError(path, "unknown automorphism tag \"" + tag + "\"");
  }
  for (const char* kind : {"inner", "outer"}) {
    if (!j.is_object() || !j.contains(kind)) continue;
    const Mat a = matrix_from_json(j[kind], child(path, kind));
    if (a.rows() != n || a.cols() != n) throw ParseError(child(path, kind), "matrix has the wrong size");
    if (Eigen::FullPivLU<Mat>(a).rank() < n) throw ParseError(child(path, kind), "matrix is singular");
    return std::string(kind) == "inner" ? Automorphism::inner(a) : Automorphism::outer(a);
  }
  throw ParseError(path, "expected \"id\", \"transpose\", {\"inner\": M} or {\"outer\": M}");
}

Json to_json(const Automorphism& a) {
  if (a.describe() == "id") return "id";
  return {{a.is_outer() ? "outer" : "inner", to_json(a.matrix())}};
}

SurfaceData surface_from_json(const Json& j) {
  SurfaceData S;
  S.genus = static_cast<int>(integer_from_json(field(j, "", "genus"), "genus"));
  if (S.genus < 0) throw ParseError("genus", "must be nonnegative");
  const auto& boundary = field(j, "", "boundary");
  if (!boundary.is_array() || boundary.empty()) throw ParseError("boundary", "expected a non-empty array");
  for (std::size_t k = 0; k < boundary.size(); ++k) S.boundary.push_back(class_from_json(boundary[k], item("boundary", k)));
  const auto n = S.rank();
  for (std::size_t k = 0; k < S.boundary.size(); ++k)
    if (S.boundary[k].rank() != n) throw ParseError(item("boundary", k), "rank differs from boundary[0]");
  if (j.contains("twists")) {
    const auto& tw = j["twists"];
    if (!tw.is_array() || static_cast<int>(tw.size()) > 2 * S.genus)
      throw ParseError("twists", "expected at most 2 * genus entries");
    for (std::size_t k = 0; k < tw.size(); ++k) S.twists.push_back(automorphism_from_json(tw[k], n, item("twists", k)));
  }
  return S;
}

Json to_json(const Direction& d) {
  Json out = {{"turns", d.turns}};
  if (d.exact) out["exact"] = to_string(*d.exact);
  return out;
}

Json to_json(const StokesStructure& S) {
  Json dirs = Json::array();
  const auto& bs = S.system;
  for (const auto& sd : S.directions) {
    Json roots = Json::array();
    for (const auto& r : sd.roots) roots.push_back({{"i", r.i}, {"j", r.j}, {"level", to_string(r.level)}});
    Json levels = Json::array();
    for (const auto& l : sd.levels) levels.push_back(to_string(l));
    dirs.push_back({{"angle", to_json(sd.d)}, {"dim", sd.dim}, {"levels", levels}, {"roots", roots}});
  }
  Json br = Json::array();
  for (std::size_t i = 0; i < bs.branches.size(); ++i)
    br.push_back({{"q", to_string(bs.branches[i].q)},
                  {"block", bs.branches[i].block},
                  {"circle", bs.branches[i].circle},
                  {"sheet", bs.branches[i].sheet},
                  {"sigma", bs.sigma[i]}});
  return {{"mode", to_string(S.mode)}, {"N", bs.N}, {"branches", br}, {"directions", dirs}};
}

namespace {

Json formal_json(const FormalGroup& fg) {
  Json blocks = Json::array();
  for (auto b : fg.blocks) blocks.push_back(b);
  const auto P = fg.permutation();
  const auto levi = fg.levi_mask();
  Json h = Json::array(), coset = Json::array();
  for (Eigen::Index r = 0; r < fg.N; ++r) {
    std::string hr, cr;
    for (Eigen::Index c = 0; c < fg.N; ++c) {
      hr += levi(r, c) ? '*' : '0';
      // H P is supported where some (r, k) in the Levi meets P(k, c) != 0
      bool any = false;
      for (Eigen::Index k = 0; k < fg.N; ++k) any = any || (levi(r, k) && std::abs(P(k, c)) > 0.5);
      cr += any ? '*' : '0';
    }
    h.push_back(hr);
    coset.push_back(cr);
  }
  return {{"blocks", blocks}, {"dim_H", fg.dim_levi()}, {"H", h}, {"H_twist", coset}};
}

}  // namespace

Json analyze(const IrregularClass& Q) {
  Json out;
  out["rank"] = Q.rank();
  out["mode"] = to_string(Q.mode());
  out["twist"] = Q.twist();
  Json circles = Json::array();
  for (const auto& e : Q.entries())
    circles.push_back({{"q", to_string(e.circle.representative())},
                       {"mult", e.mult},
                       {"ram", e.circle.ram()},
                       {"deg", e.circle.deg()},
                       {"level", to_string(e.circle.level())}});
  out["circles"] = circles;

  const auto cover = adjoint_cover(Q);
  Json cj = Json::array();
  std::int64_t apple_count = 0;
  for (const auto& e : cover) {
    const bool zero = e.circle.representative().is_zero();
    const std::int64_t n_apples = zero ? 0 : static_cast<std::int64_t>(apples(e.circle).size());
    apple_count += n_apples;
    cj.push_back({{"q", to_string(e.circle.representative())},
                  {"mult", e.mult},
                  {"ram", e.circle.ram()},
                  {"deg", e.circle.deg()},
                  {"level", to_string(e.circle.level())},
                  {"apples", n_apples}});
  }
  out["adjoint_cover"] = {{"circles", cj}, {"degree", cover_degree(cover)}, {"apples", apple_count}};

  const auto S = singular_directions(Q);
  out["stokes"] = to_json(S);
  out["formal"] = formal_json(S.formal);

  const auto U = untwist(Q);
  Json sheets = Json::array();
  for (const auto& m : U.first_sheet)
    sheets.push_back({{"lifted", to_json(m.lifted)}, {"dim", m.dim}, {"base_dim", m.base_dim}, {"match", m.match}});
  out["untwist"] = {{"r", U.r},
                    {"base_directions", U.base.directions.size()},
                    {"lifted_directions", U.lifted_structure.directions.size()},
                    {"count_ok", U.count_ok},
                    {"preimage_ok", U.preimage_ok},
                    {"first_sheet_ok", U.first_sheet_ok},
                    {"first_sheet", sheets},
                    {"descent_ok", check_descent(Q)}};
  return out;
}

}  // namespace twild
