#pragma once

// Stokes diagrams: the base circle, one closed curve per nonzero circle of
// the class (outside where Re q > 0, inside where Re q < 0), the apples, and
// the singular directions as rays.

#include <string>
#include <vector>

#include "twild/serialize.hpp"

namespace twild {

struct DiagramCurve {
  std::string q;
  std::int64_t ram = 1;
  double radius = 0;  // unmodulated radius
  std::vector<std::pair<double, double>> points;  // closed polyline, ram turns
};

struct DiagramMark {
  std::size_t curve = 0;
  Direction d;
  std::pair<double, double> point;
};

struct DiagramRay {
  std::string label;
  Direction d;
  std::int64_t dim = 0;
  std::pair<double, double> end;
};

struct Diagram {
  double size = 400;  // square canvas, centre at size / 2
  double base_radius = 90;
  std::vector<DiagramCurve> curves;
  std::vector<DiagramMark> apples;
  std::vector<DiagramRay> rays;
};

/// samples_per_turn points on each turn of each curve.
Diagram stokes_diagram(const IrregularClass& Q, int samples_per_turn = 360);

std::string to_svg(const Diagram& D);
Json to_json(const Diagram& D);

}  // namespace twild
