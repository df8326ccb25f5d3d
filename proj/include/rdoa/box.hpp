// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RDOA_BOX_HPP
#define RDOA_BOX_HPP

#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdoa/interval.hpp"

namespace rdoa {

/// Non-owning view of a box (used throughout the hot paths).
using BoxView = std::span<const Interval>;

/// Axis-aligned box: an ordered list of closed intervals.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> dims) : d_(std::move(dims)) {}
  Box(std::initializer_list<Interval> dims) : d_(dims) {}
  explicit Box(BoxView v) : d_(v.begin(), v.end()) {}

  int dim() const { return static_cast<int>(d_.size()); }
  bool empty() const { return d_.empty(); }
  Interval& operator[](int i) { return d_[i]; }
  const Interval& operator[](int i) const { return d_[i]; }
  auto begin() const { return d_.begin(); }
  auto end() const { return d_.end(); }
  operator BoxView() const { return {d_.data(), d_.size()}; }
  BoxView view() const { return {d_.data(), d_.size()}; }

  friend bool operator==(const Box& a, const Box& b) = default;

 private:
  std::vector<Interval> d_;
};

/// Splitting rule shared by the paver and the projection tree; both must
/// produce bit-identical midpoints for coverage queries to be exact.
inline double split_point(double lo, double hi) { return lo + (hi - lo) * 0.5; }

/// Max coordinate width.
double width(BoxView b);
/// Index of a widest coordinate; ties break to the lowest index.
int widest_dim(BoxView b);
/// Product of coordinate widths.
double volume(BoxView b);

/// Set-theoretic containment/intersection of closed boxes.
/// Throws std::invalid_argument on dimension mismatch.
bool contains(BoxView outer, BoxView inner);
bool intersects(BoxView a, BoxView b);
bool contains_point(BoxView b, std::span<const double> x);

/// Splits along a widest coordinate at its midpoint. The two halves share
/// the split plane and their union is the input box exactly.
/// Throws std::invalid_argument if all widths are zero.
std::pair<Box, Box> bisect(BoxView b);

/// Text form: comma-separated intervals, e.g. "[0,1],[-2,2]".
std::string to_string(BoxView b);
Box parse_box(std::string_view s);

}  // namespace rdoa

#endif  // RDOA_BOX_HPP
