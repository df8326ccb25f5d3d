// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RDOA_PAVING_HPP
#define RDOA_PAVING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rdoa/box.hpp"

namespace rdoa {

/// Flat, cache-friendly store for many same-dimension boxes.
class BoxSet {
 public:
  BoxSet() = default;
  explicit BoxSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ ? flat_.size() / dim_ : 0; }
  bool empty() const { return flat_.empty(); }

  BoxView operator[](std::size_t i) const {
    return {flat_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  void push(BoxView b);
  void append(const BoxSet& other);
  /// Removes and returns the last box.
  Box pop();
  void clear() { flat_.clear(); }
  void reserve(std::size_t boxes) { flat_.reserve(boxes * dim_); }

  double total_volume() const;

  /// Lexicographic order by (lo, hi) per coordinate; makes box-set equality
  /// and serialization deterministic.
  void sort_canonical();
  /// Exact equality of the sorted box lists.
  bool same_boxes(const BoxSet& other) const;

 private:
  int dim_ = 0;
  std::vector<Interval> flat_;
};

/// Tri-labeled box collection produced by the paver. All boxes are obtained
/// from `root` by bisection; in/out/boundary have pairwise zero-volume
/// intersection and tile the explored region.
struct Paving {
  int n = 0;  ///< state dimensions (first n coordinates)
  int m = 0;  ///< control dimensions
  Box root;
  BoxSet in, out, boundary;

  int dim() const { return n + m; }
};

/// Paving file: header "dim=<n+m> n=<n> m=<m> root=<box>" then one line per
/// box "<IN|OUT|BOU> <box>", canonically ordered.
void save_paving(const Paving& p, std::ostream& os);
/// Throws std::runtime_error naming the offending line on malformed input.
Paving load_paving(std::istream& is);

enum class Coverage : std::uint8_t { Inside, Outside, Straddle };

/// Dyadic subdivision tree over a state box recording which parts are
/// covered by inserted boxes. Insertions aligned with the bisection rule
/// resolve exactly; other boxes are inner-approximated to `max_depth`.
class ProjectionTree {
 public:
  explicit ProjectionTree(Box state_root);

  void insert(BoxView state_box, int max_depth = 64);

  /// Conservative coverage query; parts outside the root count as Outside.
  Coverage classify(BoxView state_box) const;
  /// Closed-leaf membership of a point (true iff the point lies in some
  /// covered leaf, boundaries included).
  bool covered_point(std::span<const double> x) const;

  /// Total volume of covered leaves.
  double measure() const;

  /// Covered region as maximal merged intervals (requires a 1-D tree).
  std::vector<Interval> covered_intervals() const;
  std::vector<Box> covered_leaves() const;

  const Box& root() const { return root_; }

 private:
  struct Node {
    std::int8_t label;  // 0 uncovered leaf, 1 covered, 2 mixed
    std::int8_t split_dim = -1;
    std::int32_t left = -1, right = -1;
    double split = 0.0;
  };
  Box root_;
  std::vector<Node> nodes_;

  void insert_rec(int node, Box& cur, BoxView target, int depth);
  Coverage classify_rec(int node, const Box& q) const;
};

/// state-space projection of the paving's in-boxes.
ProjectionTree project(const Paving& p);

/// Merge touching/overlapping intervals into maximal disjoint ones.
std::vector<Interval> merge_intervals(std::vector<Interval> ivs);

/// Admissible-control index for scalar-state pavings: for each x, the set
/// U(x) = {u : (x,u) in some in-box} as merged intervals.
class ControlSections {
 public:
  /// Requires p.n == 1 && p.m == 1.
  static ControlSections build(const Paving& p);

  /// Merged U(x); empty if x has no admissible controls.
  std::vector<Interval> controls_at(double x) const;
  /// Closed-box membership test: is (x,u) inside some in-box?
  bool member(double x, double u) const;

 private:
  // elementary x-segments [xs_[i], xs_[i+1]] with per-segment merged u-sets
  std::vector<double> xs_;
  std::vector<std::vector<Interval>> us_;
};

}  // namespace rdoa

#endif  // RDOA_PAVING_HPP
