#pragma once

// JSON input and output: irregular classes, surface data, matrices, and the
// analysis report.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "twild/fusion.hpp"
#include "twild/irregular_class.hpp"
#include "twild/stokes.hpp"

namespace twild {

using Json = nlohmann::ordered_json;

/// Input error.  `where` is a JSON path such as "circles[1].mult", or
/// "line 3, column 7" for a syntax error.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses text, reporting syntax errors by line and column.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

// Coefficients are written as a rational string "p/q", an exact cyclotomic
// number {"order": m, "coords": ["c0", "c1", ...]}, a root of unity
// {"root_of_unity": [m, k], "scale": "p/q"}, or a numeric {"re": x, "im": y}.
Coefficient coefficient_from_json(const Json& j, const std::string& path = "coeff");
Json to_json(const Coefficient& c);

// {"terms": [{"power": "3/2", "coeff": ...}, ...]} for q = sum coeff z^(-power).
Exponent exponent_from_json(const Json& j, const std::string& path = "exponent");
Json to_json(const Exponent& q);

// {"name": ..., "twist": "id", "circles": [{"exponent": ..., "mult": n}, ...]}
IrregularClass class_from_json(const Json& j, const std::string& path = "");
Json to_json(const IrregularClass& Q);

// Entries are numbers or [re, im] pairs, row by row.
Mat matrix_from_json(const Json& j, const std::string& path = "matrix");
Json to_json(const Mat& m);

// "id", "transpose", {"inner": matrix} or {"outer": matrix}.
Automorphism automorphism_from_json(const Json& j, Eigen::Index n, const std::string& path = "twist");
Json to_json(const Automorphism& a);

// {"genus": g, "boundary": [class, ...], "twists": [automorphism, ...]}
SurfaceData surface_from_json(const Json& j);

Json to_json(const Direction& d);
Json to_json(const StokesStructure& S);

/// ram/deg/level per circle, the adjoint cover, singular directions with
/// dimensions and levels, the shapes of H and H(d), and the untwisting summary.
Json analyze(const IrregularClass& Q);

}  // namespace twild
