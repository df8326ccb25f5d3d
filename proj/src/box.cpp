// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#include "rdoa/box.hpp"

#include <stdexcept>

namespace rdoa {

double width(BoxView b) {
  double w = 0.0;
  for (const auto& iv : b) w = std::max(w, iv.width());
  return w;
}

int widest_dim(BoxView b) {
  int best = 0;
  double w = -1.0;
  for (int i = 0; i < static_cast<int>(b.size()); ++i) {
    if (b[i].width() > w) {
      w = b[i].width();
      best = i;
    }
  }
  return best;
}

double volume(BoxView b) {
  double v = 1.0;
  for (const auto& iv : b) v *= iv.width();
  return v;
}

namespace {
void check_dims(BoxView a, BoxView b) {
  if (a.size() != b.size())
    throw std::invalid_argument("box dimension mismatch");
}
}  // namespace

bool contains(BoxView outer, BoxView inner) {
  check_dims(outer, inner);
  for (size_t i = 0; i < outer.size(); ++i)
    if (!outer[i].contains(inner[i])) return false;
  return true;
}

bool intersects(BoxView a, BoxView b) {
  check_dims(a, b);
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].intersects(b[i])) return false;
  return true;
}

bool contains_point(BoxView b, std::span<const double> x) {
  if (b.size() != x.size())
    throw std::invalid_argument("box dimension mismatch");
  for (size_t i = 0; i < b.size(); ++i)
    if (!b[i].contains(x[i])) return false;
  return true;
}

std::pair<Box, Box> bisect(BoxView b) {
  if (width(b) <= 0.0)
    throw std::invalid_argument("cannot bisect point box");
  const int k = widest_dim(b);
  const double mid = split_point(b[k].lo, b[k].hi);
  Box left(b), right(b);
  left[k] = {b[k].lo, mid};
  right[k] = {mid, b[k].hi};
  return {std::move(left), std::move(right)};
}

std::string to_string(BoxView b) {
  std::string s;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) s += ',';
    s += to_string(b[i]);
  }
  return s;
}

Box parse_box(std::string_view s) {
  std::vector<Interval> dims;
  size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (std::isspace(s[pos]) || s[pos] == ',')) ++pos;
    if (pos >= s.size()) break;
    const size_t close = s.find(']', pos);
    if (s[pos] != '[' || close == std::string_view::npos)
      throw std::invalid_argument("malformed box: '" + std::string(s) + "'");
    dims.push_back(parse_interval(s.substr(pos, close - pos + 1)));
    pos = close + 1;
  }
  if (dims.empty())
    throw std::invalid_argument("malformed box: '" + std::string(s) + "'");
  return Box(std::move(dims));
}

}  // namespace rdoa
