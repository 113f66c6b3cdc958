#include "twild/diagram.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace twild {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// cos of the phase of the leading term a z^(-e) at z = e^{i theta}.
double growth(const Exponent& q, double theta) {
  const auto& [e, a] = q.leading();
  const auto z = a.to_complex() * std::polar(1.0, -to_double(e) * theta);
  return z.real() / std::abs(z);
}

std::pair<double, double> at(const Diagram& D, double radius, double theta) {
  const double c = D.size / 2;
  return {c + radius * std::cos(theta), c - radius * std::sin(theta)};
}

std::string label_for(std::size_t k) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  } while (k-- > 0);
  return s;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

Diagram stokes_diagram(const IrregularClass& Q, int samples_per_turn) {
  Diagram D;
  const double spacing = 22, amplitude = 8;
  std::size_t rings = 0;
  for (const auto& entry : Q.entries()) rings += entry.circle.representative().is_zero() ? 0 : 1;
  const double outer = D.base_radius + spacing * static_cast<double>(rings) + 2 * amplitude;
  D.size = std::max(D.size, 2 * outer + 40);

  std::size_t ring = 0;
  for (const auto& entry : Q.entries()) {
    const auto& q = entry.circle.representative();
    if (q.is_zero()) continue;
    DiagramCurve c;
    c.q = to_string(q);
    c.ram = entry.circle.ram();
    c.radius = D.base_radius + spacing * static_cast<double>(++ring) - spacing / 2;
    const int n = samples_per_turn * static_cast<int>(c.ram);
    for (int k = 0; k <= n; ++k) {
      const double theta = kTwoPi * static_cast<double>(k) / samples_per_turn;
      c.points.push_back(at(D, c.radius + amplitude * growth(q, theta), theta));
    }
    for (const auto& d : apples(entry.circle))
      D.apples.push_back({D.curves.size(), d, at(D, c.radius - amplitude, kTwoPi * d.turns)});
    D.curves.push_back(std::move(c));
  }

  const auto S = singular_directions(Q);
  for (std::size_t k = 0; k < S.directions.size(); ++k) {
    const auto& sd = S.directions[k];
    D.rays.push_back({label_for(k), sd.d, sd.dim, at(D, outer, kTwoPi * sd.d.turns)});
  }
  return D;
}

std::string to_svg(const Diagram& D) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  const double c = D.size / 2;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << D.size << "\" height=\"" << D.size << "\" viewBox=\"0 0 "
    << D.size << ' ' << D.size << "\">\n";
  s << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "  <circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << D.base_radius
    << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (const auto& r : D.rays) {
    s << "  <line x1=\"" << c << "\" y1=\"" << c << "\" x2=\"" << r.end.first << "\" y2=\"" << r.end.second
      << "\" stroke=\"#b03030\" stroke-dasharray=\"4 3\"/>\n";
    s << "  <text x=\"" << r.end.first << "\" y=\"" << r.end.second << "\" font-size=\"12\" fill=\"#b03030\">" << r.label
      << "</text>\n";
  }
  for (const auto& cv : D.curves) {
    s << "  <polyline fill=\"none\" stroke=\"#2050a0\" stroke-width=\"1\" points=\"";
    for (const auto& [x, y] : cv.points) s << x << ',' << y << ' ';
    s << "\"><title>" << xml_escape(cv.q) << "</title></polyline>\n";
  }
  for (const auto& m : D.apples)
    s << "  <circle cx=\"" << m.point.first << "\" cy=\"" << m.point.second
      << "\" r=\"3\" fill=\"#208040\"/>\n";
  s << "</svg>\n";
  return s.str();
}

Json to_json(const Diagram& D) {
  auto pt = [](const std::pair<double, double>& p) { return Json::array({p.first, p.second}); };
  Json curves = Json::array(), apples_j = Json::array(), rays = Json::array();
  for (const auto& cv : D.curves) {
    Json pts = Json::array();
    for (const auto& p : cv.points) pts.push_back(pt(p));
    curves.push_back({{"q", cv.q}, {"ram", cv.ram}, {"radius", cv.radius}, {"points", pts}});
  }
  for (const auto& m : D.apples)
    apples_j.push_back({{"curve", m.curve}, {"angle", to_json(m.d)}, {"sheet", m.d.sheet}, {"point", pt(m.point)}});
  for (const auto& r : D.rays)
    rays.push_back({{"label", r.label}, {"angle", to_json(r.d)}, {"dim", r.dim}, {"end", pt(r.end)}});
  return {{"size", D.size},
          {"base_circle", {{"centre", {D.size / 2, D.size / 2}}, {"radius", D.base_radius}}},
          {"curves", curves},
          {"apples", apples_j},
          {"rays", rays}};
}

}  // namespace twild
