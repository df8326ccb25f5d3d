// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#include "rdoa/interval.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace rdoa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Slack applied after libm calls (sin/cos/exp/pow); glibc guarantees are
// close to 0.5 ulp but not certified, so step several ulps.
constexpr int kLibmSlack = 4;

double step(double x, int dir) {
  if (!std::isfinite(x)) return x;
  if (x == 0.0) {
    return dir < 0 ? -std::numeric_limits<double>::denorm_min()
                   : std::numeric_limits<double>::denorm_min();
  }
  auto bits = std::bit_cast<std::uint64_t>(x);
  const bool grow = (x > 0.0) == (dir > 0);
  bits += grow ? 1u : -1u;
  return std::bit_cast<double>(bits);
}

double step_n(double x, int dir, int n) {
  for (int i = 0; i < n; ++i) x = step(x, dir);
  return x;
}

// 0 * inf arises only when one factor is a zero endpoint against an
// unbounded one; the exact product set contribution is 0.
double prod(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

}  // namespace

double step_down(double x) { return step(x, -1); }
double step_up(double x) { return step(x, +1); }

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (lo > hi) return Interval::empty();
  return {lo, hi};
}

Interval operator+(const Interval& a, const Interval& b) {
  assert(!a.is_empty() && !b.is_empty());
  return {step_down(a.lo + b.lo), step_up(a.hi + b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  assert(!a.is_empty() && !b.is_empty());
  return {step_down(a.lo - b.hi), step_up(a.hi - b.lo)};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  assert(!a.is_empty() && !b.is_empty());
  const double p1 = prod(a.lo, b.lo), p2 = prod(a.lo, b.hi);
  const double p3 = prod(a.hi, b.lo), p4 = prod(a.hi, b.hi);
  return {step_down(std::min({p1, p2, p3, p4})),
          step_up(std::max({p1, p2, p3, p4}))};
}

Interval operator/(const Interval& a, const Interval& b) {
  assert(!a.is_empty() && !b.is_empty());
  if (b.contains(0.0)) return Interval::entire();
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi;
  const double q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return {step_down(std::min({q1, q2, q3, q4})),
          step_up(std::max({q1, q2, q3, q4}))};
}

Interval sqr(const Interval& a) {
  assert(!a.is_empty());
  const double lo_a = std::abs(a.lo), hi_a = std::abs(a.hi);
  const double big = std::max(lo_a, hi_a);
  if (a.contains(0.0)) return {0.0, step_up(big * big)};
  const double small = std::min(lo_a, hi_a);
  return {step_down(small * small), step_up(big * big)};
}

Interval pow_int(const Interval& a, int k) {
  assert(!a.is_empty());
  if (k == 0) return Interval::point(1.0);
  if (k < 0) return Interval::point(1.0) / pow_int(a, -k);
  if (k == 1) return a;
  if (k == 2) return sqr(a);
  if (k % 2 == 0) {
    // even power: monotone in |x|
    const Interval m = abs(a);
    return {step_n(std::pow(m.lo, k), -1, kLibmSlack),
            step_n(std::pow(m.hi, k), +1, kLibmSlack)};
  }
  // odd power: monotone
  return {step_n(std::pow(a.lo, k), -1, kLibmSlack),
          step_n(std::pow(a.hi, k), +1, kLibmSlack)};
}

namespace {

// Does {phase + 2*pi*k : k in Z} intersect [lo, hi]? Tolerant toward "yes"
// so extremum detection stays sound for arguments up to ~1e15.
bool has_critical(double lo, double hi, double phase) {
  const double tl = (lo - phase) / kTwoPi;
  const double th = (hi - phase) / kTwoPi;
  const double tol =
      4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(tl), std::abs(th)}) +
      1e-12;
  return std::ceil(tl - tol) <= std::floor(th + tol);
}

}  // namespace

Interval sin(const Interval& a) {
  assert(!a.is_empty());
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) return {-1.0, 1.0};
  if (a.width() >= kTwoPi || std::max(std::abs(a.lo), std::abs(a.hi)) > 1e15)
    return {-1.0, 1.0};
  const double slo = std::sin(a.lo), shi = std::sin(a.hi);
  double lo = step_n(std::min(slo, shi), -1, kLibmSlack);
  double hi = step_n(std::max(slo, shi), +1, kLibmSlack);
  if (has_critical(a.lo, a.hi, kPi / 2)) hi = 1.0;
  if (has_critical(a.lo, a.hi, -kPi / 2)) lo = -1.0;
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

Interval cos(const Interval& a) {
  assert(!a.is_empty());
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) return {-1.0, 1.0};
  if (a.width() >= kTwoPi || std::max(std::abs(a.lo), std::abs(a.hi)) > 1e15)
    return {-1.0, 1.0};
  const double clo = std::cos(a.lo), chi = std::cos(a.hi);
  double lo = step_n(std::min(clo, chi), -1, kLibmSlack);
  double hi = step_n(std::max(clo, chi), +1, kLibmSlack);
  if (has_critical(a.lo, a.hi, 0.0)) hi = 1.0;
  if (has_critical(a.lo, a.hi, kPi)) lo = -1.0;
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

Interval exp(const Interval& a) {
  assert(!a.is_empty());
  const double lo = std::max(0.0, step_n(std::exp(a.lo), -1, kLibmSlack));
  const double hi = step_n(std::exp(a.hi), +1, kLibmSlack);
  return {lo, hi};
}

Interval abs(const Interval& a) {
  assert(!a.is_empty());
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}

std::string to_string(const Interval& a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", a.lo, a.hi);
  return buf;
}

Interval parse_interval(std::string_view s) {
  auto fail = [&] {
    throw std::invalid_argument("malformed interval: '" + std::string(s) + "'");
  };
  size_t i = 0;
  auto skip_ws = [&] { while (i < s.size() && std::isspace(s[i])) ++i; };
  skip_ws();
  if (i >= s.size() || s[i] != '[') fail();
  ++i;
  auto read_num = [&]() -> double {
    skip_ws();
    size_t start = i;
    while (i < s.size() && s[i] != ',' && s[i] != ']') ++i;
    size_t end = i;
    while (end > start && std::isspace(s[end - 1])) --end;
    double v = 0;
    auto r = std::from_chars(s.data() + start, s.data() + end, v);
    if (r.ec != std::errc() || r.ptr != s.data() + end) fail();
    return v;
  };
  const double lo = read_num();
  if (i >= s.size() || s[i] != ',') fail();
  ++i;
  const double hi = read_num();
  if (i >= s.size() || s[i] != ']') fail();
  ++i;
  skip_ws();
  if (i != s.size()) fail();
  if (lo > hi) fail();
  return {lo, hi};
}

}  // namespace rdoa
