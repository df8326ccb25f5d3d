// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RDOA_INTERVAL_HPP
#define RDOA_INTERVAL_HPP

#include <cassert>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace rdoa {

/// Closed interval [lo, hi] with outward-rounded arithmetic.
///
/// All operations inflate results so that the exact real-arithmetic result
/// set is contained in the computed interval. Rounding is realized by
/// ulp-stepping after each primitive (directed rounding modes are not used;
/// they do not compose with vectorized libm calls). Exact operations
/// (negation, abs, hull) do not inflate.
///
/// The empty interval is a distinct sentinel (lo=+inf, hi=-inf); live values
/// always satisfy lo <= hi. Unbounded endpoints appear only as the result of
/// division by an interval containing zero, or overflow.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static constexpr Interval point(double x) { return {x, x}; }
  static constexpr Interval empty() {
    return {std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
  }
  static constexpr Interval entire() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  bool is_empty() const { return lo > hi; }
  bool is_point() const { return lo == hi; }
  double width() const { return is_empty() ? 0.0 : hi - lo; }
  double mid() const { return lo + (hi - lo) * 0.5; }

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const {
    return o.is_empty() || (lo <= o.lo && o.hi <= hi);
  }
  bool intersects(const Interval& o) const {
    return !is_empty() && !o.is_empty() && lo <= o.hi && o.lo <= hi;
  }

  friend bool operator==(const Interval& a, const Interval& b) = default;
};

/// One ulp toward -inf (finite x only; infinities pass through).
double step_down(double x);
/// One ulp toward +inf.
double step_up(double x);

Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& a);
Interval pow_int(const Interval& a, int k);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);
Interval abs(const Interval& a);

/// Text form "[lo,hi]" with round-trip-exact decimal endpoints.
std::string to_string(const Interval& a);
/// Parses "[lo,hi]"; throws std::invalid_argument on malformed input.
Interval parse_interval(std::string_view s);

}  // namespace rdoa

#endif  // RDOA_INTERVAL_HPP
