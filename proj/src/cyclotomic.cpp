#include "twild/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace twild {

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_int = [](std::string_view s) -> std::int64_t {
    if (s.empty()) throw std::invalid_argument("empty integer in rational");
    std::size_t pos = 0;
    std::string str(s);
    long long v = std::stoll(str, &pos);
    if (pos != str.size()) throw std::invalid_argument("bad rational '" + str + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  auto den = parse_int(trim(text.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in rational");
  return Rational(parse_int(trim(text.substr(0, slash))), den);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor_of(const Rational& r) {
  auto n = r.numerator();
  auto d = r.denominator();
  auto q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

std::int64_t ceil_of(const Rational& r) { return -floor_of(-r); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

namespace {

using IntPoly = std::vector<std::int64_t>;

IntPoly exact_divide(IntPoly num, const IntPoly& den) {
  // den is monic
  const std::size_t dd = den.size() - 1;
  IntPoly quot(num.size() - dd, 0);
  for (std::size_t i = num.size() - 1;; --i) {
    const auto c = num[i];
    quot[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    if (i == dd) break;
  }
  return quot;
}

}  // namespace

const IntPoly& cyclotomic_polynomial(std::int64_t m) {
  static std::mutex mutex;
  static std::map<std::int64_t, IntPoly> cache;
  if (m < 1) throw std::invalid_argument("cyclotomic order must be positive");
  std::lock_guard lock(mutex);
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  IntPoly poly(static_cast<std::size_t>(m) + 1, 0);
  poly[0] = -1;
  poly[static_cast<std::size_t>(m)] = 1;
  for (std::int64_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    // recursion without re-locking: compute divisors bottom-up
    auto it = cache.find(d);
    if (it == cache.end()) {
      // build missing divisor polynomial
      IntPoly p(static_cast<std::size_t>(d) + 1, 0);
      p[0] = -1;
      p[static_cast<std::size_t>(d)] = 1;
      for (std::int64_t e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        auto jt = cache.find(e);
        if (jt == cache.end()) throw std::logic_error("cyclotomic cache order");
        p = exact_divide(p, jt->second);
      }
      it = cache.emplace(d, p).first;
    }
    poly = exact_divide(poly, it->second);
  }
  return cache.emplace(m, poly).first->second;
}

std::int64_t euler_phi(std::int64_t m) {
  std::int64_t result = m;
  std::int64_t n = m;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

Cyclo::Cyclo() : order_(1), coords_(1, Rational(0)) {}

Cyclo::Cyclo(Rational q, std::int64_t order) : order_(order), coords_(static_cast<std::size_t>(order), Rational(0)) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  coords_[0] = q;
}

Cyclo::Cyclo(std::int64_t order, std::vector<Rational> coords) : order_(order), coords_(std::move(coords)) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  if (coords_.size() > static_cast<std::size_t>(order))
    throw std::invalid_argument("cyclotomic coordinate vector longer than its order");
  coords_.resize(static_cast<std::size_t>(order), Rational(0));
  reduce();
}

Cyclo Cyclo::root_of_unity(std::int64_t m, std::int64_t k) {
  k %= m;
  if (k < 0) k += m;
  std::vector<Rational> c(static_cast<std::size_t>(m), Rational(0));
  c[static_cast<std::size_t>(k)] = 1;
  return Cyclo(m, std::move(c));
}

void Cyclo::reduce() {
  // coords_ holds a polynomial of degree < order_ (x^m = 1 already applied);
  // divide by the monic cyclotomic polynomial.
  const auto& phi = cyclotomic_polynomial(order_);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = coords_.size(); i-- > deg;) {
    auto c = coords_[i];
    if (c.numerator() == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) coords_[i - deg + j] -= c * Rational(phi[j]);
  }
}

Cyclo Cyclo::lifted(std::int64_t big_order) const {
  if (big_order % order_ != 0) throw std::invalid_argument("lift target is not a multiple of the order");
  if (big_order == order_) return *this;
  const auto step = big_order / order_;
  std::vector<Rational> c(static_cast<std::size_t>(big_order), Rational(0));
  for (std::size_t i = 0; i < coords_.size(); ++i) c[i * static_cast<std::size_t>(step)] = coords_[i];
  return Cyclo(big_order, std::move(c));
}

bool Cyclo::is_zero() const {
  for (const auto& c : coords_)
    if (c.numerator() != 0) return false;
  return true;
}

Cyclo Cyclo::conj() const {
  std::vector<Rational> c(coords_.size(), Rational(0));
  const auto m = static_cast<std::size_t>(order_);
  for (std::size_t i = 0; i < m; ++i) c[(m - i) % m] += coords_[i];
  return Cyclo(order_, std::move(c));
}

std::complex<double> Cyclo::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i].numerator() == 0) continue;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(order_);
    z += to_double(coords_[i]) * std::polar(1.0, angle);
  }
  return z;
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

Cyclo operator+(const Cyclo& a, const Cyclo& b) {
  const auto m = lcm64(a.order_, b.order_);
  Cyclo x = a.lifted(m);
  Cyclo y = b.lifted(m);
  for (std::size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
  return x;
}

Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }

Cyclo operator*(const Cyclo& a, const Cyclo& b) {
  const auto m = lcm64(a.order_, b.order_);
  Cyclo x = a.lifted(m);
  Cyclo y = b.lifted(m);
  const auto n = static_cast<std::size_t>(m);
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (x.coords_[i].numerator() == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y.coords_[j].numerator() == 0) continue;
      c[(i + j) % n] += x.coords_[i] * y.coords_[j];
    }
  }
  return Cyclo(m, std::move(c));
}

bool operator==(const Cyclo& a, const Cyclo& b) {
  const auto m = lcm64(a.order_, b.order_);
  return a.lifted(m).coords_ == b.lifted(m).coords_;
}

std::optional<Rational> exact_argument_turns(const Cyclo& a) {
  if (a.is_zero()) return std::nullopt;
  // a/conj(a) is a root of unity of Q(zeta_m) whenever arg(a) is a rational
  // multiple of pi, so its order divides m' = lcm(2, m) and arg(a) lies on
  // the grid 2*pi*j/(2m').
  const std::int64_t grid = 2 * lcm64(2, a.order());
  const auto z = a.to_complex();
  double turns = std::arg(z) / (2.0 * std::numbers::pi);
  if (turns < 0) turns += 1.0;
  auto j = static_cast<std::int64_t>(std::llround(turns * static_cast<double>(grid))) % grid;
  const Cyclo rotated = a * Cyclo::root_of_unity(grid, -j);
  if (!rotated.is_real()) return std::nullopt;
  if (rotated.to_complex().real() <= 0) return std::nullopt;
  return Rational(j, grid);
}

}  // namespace twild
