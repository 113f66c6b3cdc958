#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace twild {

/// Exact rational number; always reduced with a positive denominator.
using Rational = boost::rational<std::int64_t>;

/// Parses "p", "-p" or "p/q".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

std::int64_t floor_of(const Rational& r);
std::int64_t ceil_of(const Rational& r);

/// Fractional part in [0, 1).
inline Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace twild
