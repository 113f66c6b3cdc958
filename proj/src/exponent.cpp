#include "twild/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace twild {

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "numeric"; }

std::complex<double> Coefficient::to_complex() const {
  if (auto c = std::get_if<Cyclo>(&value_)) return c->to_complex();
  return std::get<std::complex<double>>(value_);
}

bool Coefficient::is_zero() const {
  if (auto c = std::get_if<Cyclo>(&value_)) return c->is_zero();
  return std::abs(std::get<std::complex<double>>(value_)) < kNumericTolerance;
}

std::pair<double, std::optional<Rational>> Coefficient::argument_turns() const {
  if (auto c = std::get_if<Cyclo>(&value_)) {
    if (auto exact = exact_argument_turns(*c)) return {to_double(*exact), exact};
  }
  double t = std::arg(to_complex()) / (2.0 * std::numbers::pi);
  if (t < 0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  return {t, std::nullopt};
}

Coefficient Coefficient::operator-() const {
  if (mode() == Mode::Exact) return Coefficient(-exact());
  return Coefficient(-to_complex());
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  if (a.mode() == Mode::Exact && b.mode() == Mode::Exact) return Coefficient(a.exact() + b.exact());
  return Coefficient(a.to_complex() + b.to_complex());
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  if (a.mode() == Mode::Exact && b.mode() == Mode::Exact) return Coefficient(a.exact() * b.exact());
  return Coefficient(a.to_complex() * b.to_complex());
}

bool operator==(const Coefficient& a, const Coefficient& b) {
  if (a.mode() == Mode::Exact && b.mode() == Mode::Exact) return a.exact() == b.exact();
  return std::abs(a.to_complex() - b.to_complex()) < kNumericTolerance;
}

Mode Exponent::mode() const {
  for (const auto& [e, c] : terms_)
    if (c.mode() == Mode::Numeric) return Mode::Numeric;
  return Mode::Exact;
}

std::complex<double> Exponent::evaluate(double modulus, double theta) const {
  std::complex<double> sum = 0;
  for (const auto& [e, c] : terms_) {
    const double ed = to_double(e);
    sum += c.to_complex() * std::pow(modulus, -ed) * std::polar(1.0, -ed * theta);
  }
  return sum;
}

Exponent Exponent::pullback(std::int64_t r) const {
  Exponent out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e * Rational(r), c);
  return out;
}

bool operator==(const Exponent& a, const Exponent& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [e, c] : a.terms_) {
    if (it->first != e || !(it->second == c)) return false;
    ++it;
  }
  return true;
}

Exponent operator-(const Exponent& a) {
  Exponent out;
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
  return out;
}

Exponent normalize(const std::vector<RawTerm>& raw) {
  Exponent::Terms acc;
  for (const auto& [e, c] : raw) {
    auto [it, inserted] = acc.emplace(e, c);
    if (!inserted) it->second = it->second + c;
  }
  Exponent out;
  for (auto& [e, c] : acc) {
    if (c.is_zero()) continue;
    if (e.numerator() <= 0)
      throw std::invalid_argument("exponent term z^(-" + to_string(e) +
                                  ") is constant or holomorphic; only poles are allowed");
    out.terms_.emplace(e, c);
  }
  return out;
}

std::int64_t ramification(const Exponent& q) {
  std::int64_t r = 1;
  for (const auto& [e, c] : q.terms()) r = lcm64(r, e.denominator());
  return r;
}

DegreeLevel degree_level(const Exponent& q) {
  if (q.is_zero()) return {};
  const auto r = ramification(q);
  const Rational top = q.leading().first * Rational(r);
  DegreeLevel out;
  out.degree = top.numerator();
  out.level = Rational(out.degree, r);
  return out;
}

std::vector<Exponent> galois_orbit(const Exponent& q) {
  const auto r = ramification(q);
  std::vector<Exponent> orbit;
  orbit.reserve(static_cast<std::size_t>(r));
  for (std::int64_t j = 0; j < r; ++j) {
    std::vector<RawTerm> raw;
    for (const auto& [e, c] : q.terms()) {
      const auto power = -(e * Rational(r)).numerator() * j;
      raw.emplace_back(e, c * Coefficient(Cyclo::root_of_unity(r, power)));
    }
    orbit.push_back(normalize(raw));
  }
  return orbit;
}

bool same_circle(const Exponent& a, const Exponent& b) {
  if (ramification(a) != ramification(b)) return false;
  if (a.terms().size() != b.terms().size()) return false;
  for (const auto& branch : galois_orbit(a))
    if (branch == b) return true;
  return false;
}

Exponent difference(const Exponent& a, const Exponent& b) {
  std::vector<RawTerm> raw;
  for (const auto& [e, c] : a.terms()) raw.emplace_back(e, c);
  for (const auto& [e, c] : b.terms()) raw.emplace_back(e, -c);
  return normalize(raw);
}

CircleClass::CircleClass(Exponent representative) : rep_(std::move(representative)) {
  ram_ = ramification(rep_);
  const auto dl = degree_level(rep_);
  deg_ = dl.degree;
  level_ = dl.level;
}

double Direction::radians() const { return 2.0 * std::numbers::pi * turns; }

bool Direction::same_angle(const Direction& other) const {
  if (exact && other.exact) return *exact == *other.exact;
  double d = std::fabs(turns - other.turns);
  d = std::min(d, 1.0 - d);
  return 2.0 * std::numbers::pi * d < 1e-9;
}

bool Direction::before(const Direction& other) const {
  if (exact && other.exact) return *exact < *other.exact;
  return turns < other.turns;
}

namespace {

// Solutions t in [0, span) of  alpha - e t = 1/2 (mod 1), i.e. t = (alpha - 1/2 + m)/e.
std::vector<std::pair<double, std::optional<Rational>>> solve_negative_real(
    double alpha, const std::optional<Rational>& alpha_exact, const Rational& e, std::int64_t span) {
  std::vector<std::pair<double, std::optional<Rational>>> out;
  const Rational limit = e * Rational(span);
  if (alpha_exact) {
    const Rational base = *alpha_exact - Rational(1, 2);
    for (std::int64_t m = ceil_of(-base);; ++m) {
      const Rational x = base + Rational(m);
      if (x >= limit) break;
      const Rational t = x / e;
      out.emplace_back(to_double(t), t);
    }
    return out;
  }
  const double ed = to_double(e);
  const double base = alpha - 0.5;
  const double lim = to_double(limit);
  for (auto m = static_cast<std::int64_t>(std::ceil(-base - 1e-12));; ++m) {
    const double x = base + static_cast<double>(m);
    if (x >= lim - 1e-12) break;
    out.emplace_back(std::max(0.0, x / ed), std::nullopt);
  }
  return out;
}

}  // namespace

std::vector<Direction> apples(const CircleClass& circle) {
  if (circle.representative().is_zero()) throw std::invalid_argument("the zero circle <0> has no apples");
  const auto& [e, a] = circle.representative().leading();
  const auto [alpha, alpha_exact] = a.argument_turns();
  std::vector<Direction> out;
  for (const auto& [t, exact] : solve_negative_real(alpha, alpha_exact, e, circle.ram())) {
    Direction d;
    if (exact) {
      d.sheet = floor_of(*exact);
      d.exact = *exact - Rational(d.sheet);
      d.turns = to_double(*d.exact);
    } else {
      d.sheet = static_cast<std::int64_t>(std::floor(t));
      d.turns = t - static_cast<double>(d.sheet);
    }
    out.push_back(d);
  }
  return out;
}

std::vector<Direction> apples_on_base_turn(const Exponent& q) {
  if (q.is_zero()) return {};
  const auto& [e, a] = q.leading();
  const auto [alpha, alpha_exact] = a.argument_turns();
  std::vector<Direction> out;
  for (const auto& [t, exact] : solve_negative_real(alpha, alpha_exact, e, 1)) {
    Direction d;
    d.turns = t;
    d.exact = exact;
    out.push_back(d);
  }
  return out;
}

std::string to_string(const Exponent& q) {
  if (q.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : q.terms()) {
    if (!first) os << " + ";
    first = false;
    const auto z = c.to_complex();
    if (c.mode() == Mode::Exact) {
      const auto& coords = c.exact().coords();
      bool rational = std::all_of(coords.begin() + 1, coords.end(), [](const Rational& x) { return x.numerator() == 0; });
      if (rational)
        os << to_string(coords[0]);
      else
        os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::fabs(z.imag()) << "i)";
    } else {
      os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::fabs(z.imag()) << "i)";
    }
    os << "*z^(-" << to_string(e) << ")";
  }
  return os.str();
}

}  // namespace twild
