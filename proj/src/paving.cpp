// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#include "rdoa/paving.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdoa {

void BoxSet::push(BoxView b) {
  if (dim_ == 0) dim_ = static_cast<int>(b.size());
  if (static_cast<int>(b.size()) != dim_)
    throw std::invalid_argument("box dimension mismatch");
  flat_.insert(flat_.end(), b.begin(), b.end());
}

void BoxSet::append(const BoxSet& other) {
  if (other.empty()) return;
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_)
    throw std::invalid_argument("box dimension mismatch");
  flat_.insert(flat_.end(), other.flat_.begin(), other.flat_.end());
}

Box BoxSet::pop() {
  const std::size_t last = size() - 1;
  Box b((*this)[last]);
  flat_.resize(last * dim_);
  return b;
}

double BoxSet::total_volume() const {
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) v += volume((*this)[i]);
  return v;
}

namespace {
bool box_less(const Interval* a, const Interval* b, int dim) {
  for (int k = 0; k < dim; ++k) {
    if (a[k].lo != b[k].lo) return a[k].lo < b[k].lo;
    if (a[k].hi != b[k].hi) return a[k].hi < b[k].hi;
  }
  return false;
}
}  // namespace

void BoxSet::sort_canonical() {
  const std::size_t count = size();
  if (count < 2) return;
  std::vector<std::uint32_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<std::uint32_t>(i);
  const Interval* base = flat_.data();
  const int d = dim_;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return box_less(base + a * d, base + b * d, d);
  });
  std::vector<Interval> out(flat_.size());
  for (std::size_t i = 0; i < count; ++i)
    std::memcpy(out.data() + i * d, base + order[i] * d, d * sizeof(Interval));
  flat_ = std::move(out);
}

bool BoxSet::same_boxes(const BoxSet& other) const {
  if (dim_ != other.dim_ || flat_.size() != other.flat_.size()) return false;
  return std::equal(flat_.begin(), flat_.end(), other.flat_.begin());
}

// ---------------------------------------------------------------------------

void save_paving(const Paving& p, std::ostream& os) {
  os << "dim=" << p.dim() << " n=" << p.n << " m=" << p.m
     << " root=" << to_string(p.root.view()) << "\n";
  const auto dump = [&](const char* tag, const BoxSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      os << tag << ' ' << to_string(s[i]) << "\n";
  };
  dump("IN", p.in);
  dump("OUT", p.out);
  dump("BOU", p.boundary);
}

Paving load_paving(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("paving line " + std::to_string(lineno) + ": " + msg);
  };
  if (!std::getline(is, line)) throw std::runtime_error("paving: empty input");
  ++lineno;
  Paving p;
  int dim = 0;
  {
    std::istringstream hs(line);
    std::string tok;
    bool have_dim = false, have_n = false, have_m = false, have_root = false;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) fail("malformed header token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      try {
        if (key == "dim") { dim = std::stoi(val); have_dim = true; }
        else if (key == "n") { p.n = std::stoi(val); have_n = true; }
        else if (key == "m") { p.m = std::stoi(val); have_m = true; }
        else if (key == "root") { p.root = parse_box(val); have_root = true; }
        else fail("unknown header key '" + key + "'");
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (!have_dim || !have_n || !have_m || !have_root) fail("incomplete header");
    if (dim != p.n + p.m) fail("header dim mismatch (dim != n+m)");
    if (p.root.dim() != dim) fail("header dim mismatch (root)");
  }
  p.in = BoxSet(dim);
  p.out = BoxSet(dim);
  p.boundary = BoxSet(dim);
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) fail("missing label");
    const std::string label = line.substr(0, sp);
    Box b;
    try {
      b = parse_box(line.substr(sp + 1));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (b.dim() != dim) fail("box dimension mismatch");
    if (label == "IN") p.in.push(b);
    else if (label == "OUT") p.out.push(b);
    else if (label == "BOU") p.boundary.push(b);
    else fail("unknown label '" + label + "'");
  }
  return p;
}

// ---------------------------------------------------------------------------
// ProjectionTree

ProjectionTree::ProjectionTree(Box state_root) : root_(std::move(state_root)) {
  nodes_.push_back({0, -1, -1, -1, 0.0});
}

void ProjectionTree::insert(BoxView state_box, int max_depth) {
  if (static_cast<int>(state_box.size()) != root_.dim())
    throw std::invalid_argument("projection insert dimension mismatch");
  Box cur = root_;
  insert_rec(0, cur, state_box, max_depth);
}

void ProjectionTree::insert_rec(int node, Box& cur, BoxView target, int depth) {
  if (nodes_[node].label == 1) return;  // already covered
  if (!intersects(cur.view(), target)) return;
  if (contains(target, cur.view())) {
    nodes_[node].label = 1;
    nodes_[node].split_dim = -1;  // collapse any finer structure
    nodes_[node].left = nodes_[node].right = -1;
    return;
  }
  if (depth <= 0) return;  // inner approximation: leave uncovered
  // overlap is partial in at least one coordinate
  if (nodes_[node].split_dim < 0) {
    // split along a coordinate where target does not span cur
    int dim = -1;
    for (int k = 0; k < cur.dim(); ++k) {
      if (!(target[k].lo <= cur[k].lo && cur[k].hi <= target[k].hi) &&
          cur[k].width() > 0.0) {
        dim = k;
        break;
      }
    }
    if (dim < 0) return;  // degenerate
    nodes_[node].split_dim = static_cast<std::int8_t>(dim);
    nodes_[node].split = split_point(cur[dim].lo, cur[dim].hi);
    nodes_[node].left = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({0, -1, -1, -1, 0.0});
    nodes_[node].right = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({0, -1, -1, -1, 0.0});
    nodes_[node].label = 2;
  }
  const int dim = nodes_[node].split_dim;
  const double mid = nodes_[node].split;
  const Interval saved = cur[dim];
  if (target[dim].lo < mid) {
    cur[dim] = {saved.lo, mid};
    insert_rec(nodes_[node].left, cur, target, depth - 1);
  }
  if (target[dim].hi > mid) {
    cur[dim] = {mid, saved.hi};
    insert_rec(nodes_[node].right, cur, target, depth - 1);
  }
  cur[dim] = saved;
  // merge fully covered children
  const Node& l = nodes_[nodes_[node].left];
  const Node& r = nodes_[nodes_[node].right];
  if (l.label == 1 && r.label == 1) {
    nodes_[node].label = 1;
    nodes_[node].split_dim = -1;
    nodes_[node].left = nodes_[node].right = -1;
  }
}

Coverage ProjectionTree::classify_rec(int node, const Box& q) const {
  const Node& nd = nodes_[node];
  if (nd.label == 1) return Coverage::Inside;
  if (nd.split_dim < 0)
    return nd.label == 0 ? Coverage::Outside : Coverage::Straddle;
  const int dim = nd.split_dim;
  const double mid = nd.split;
  const bool go_left = q[dim].lo < mid;
  const bool go_right = q[dim].hi > mid;
  if (go_left && !go_right) return classify_rec(nd.left, q);
  if (go_right && !go_left) return classify_rec(nd.right, q);
  if (!go_left && !go_right) {
    // degenerate query exactly on the split plane: covered iff either side
    // covers it (closed leaves)
    const Coverage cl = classify_rec(nd.left, q);
    if (cl == Coverage::Inside) return cl;
    const Coverage cr = classify_rec(nd.right, q);
    if (cr == Coverage::Inside) return cr;
    return (cl == Coverage::Outside && cr == Coverage::Outside)
               ? Coverage::Outside
               : Coverage::Straddle;
  }
  Box ql = q;
  ql[dim] = {q[dim].lo, mid};
  const Coverage cl = classify_rec(nd.left, ql);
  if (cl == Coverage::Straddle) return Coverage::Straddle;
  Box qr = q;
  qr[dim] = {mid, q[dim].hi};
  const Coverage cr = classify_rec(nd.right, qr);
  if (cr == Coverage::Straddle) return Coverage::Straddle;
  return cl == cr ? cl : Coverage::Straddle;
}

Coverage ProjectionTree::classify(BoxView state_box) const {
  if (static_cast<int>(state_box.size()) != root_.dim())
    throw std::invalid_argument("coverage query dimension mismatch");
  // clip to the root box; anything strictly outside counts as Outside
  Box q(state_box);
  bool shrunk = false;
  for (int k = 0; k < root_.dim(); ++k) {
    const Interval c = intersect(q[k], root_[k]);
    if (c.is_empty()) return Coverage::Outside;
    if (c.lo != q[k].lo || c.hi != q[k].hi) shrunk = true;
    q[k] = c;
  }
  const Coverage inner = classify_rec(0, q);
  if (!shrunk) return inner;
  // part of the query lies outside the root
  return inner == Coverage::Outside ? Coverage::Outside : Coverage::Straddle;
}

bool ProjectionTree::covered_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != root_.dim())
    throw std::invalid_argument("coverage query dimension mismatch");
  for (int k = 0; k < root_.dim(); ++k)
    if (!root_[k].contains(x[k])) return false;
  // iterative descent; on split planes both sides are explored (closed leaves)
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    const Node& nd = nodes_[node];
    if (nd.label == 1) return true;
    if (nd.split_dim < 0) continue;
    if (x[nd.split_dim] <= nd.split) stack.push_back(nd.left);
    if (x[nd.split_dim] >= nd.split) stack.push_back(nd.right);
  }
  return false;
}

double ProjectionTree::measure() const {
  struct Walker {
    const std::vector<Node>& nodes;
    double total = 0.0;
    void walk(int node, Box& cur) {
      const Node& nd = nodes[node];
      if (nd.label == 1) {
        total += volume(cur.view());
        return;
      }
      if (nd.split_dim < 0) return;
      const int dim = nd.split_dim;
      const Interval saved = cur[dim];
      cur[dim] = {saved.lo, nd.split};
      walk(nd.left, cur);
      cur[dim] = {nd.split, saved.hi};
      walk(nd.right, cur);
      cur[dim] = saved;
    }
  } w{nodes_};
  Box cur = root_;
  w.walk(0, cur);
  return w.total;
}

std::vector<Box> ProjectionTree::covered_leaves() const {
  struct Walker {
    const std::vector<Node>& nodes;
    std::vector<Box> out;
    void walk(int node, Box& cur) {
      const Node& nd = nodes[node];
      if (nd.label == 1) {
        out.push_back(cur);
        return;
      }
      if (nd.split_dim < 0) return;
      const int dim = nd.split_dim;
      const Interval saved = cur[dim];
      cur[dim] = {saved.lo, nd.split};
      walk(nd.left, cur);
      cur[dim] = {nd.split, saved.hi};
      walk(nd.right, cur);
      cur[dim] = saved;
    }
  } w{nodes_};
  Box cur = root_;
  w.walk(0, cur);
  return std::move(w.out);
}

std::vector<Interval> merge_intervals(std::vector<Interval> ivs) {
  if (ivs.empty()) return ivs;
  std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  std::vector<Interval> out;
  out.push_back(ivs[0]);
  for (std::size_t i = 1; i < ivs.size(); ++i) {
    if (ivs[i].lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, ivs[i].hi);
    else
      out.push_back(ivs[i]);
  }
  return out;
}

std::vector<Interval> ProjectionTree::covered_intervals() const {
  if (root_.dim() != 1)
    throw std::invalid_argument("covered_intervals requires a 1-D tree");
  std::vector<Interval> ivs;
  for (const Box& b : covered_leaves()) ivs.push_back(b[0]);
  return merge_intervals(std::move(ivs));
}

ProjectionTree project(const Paving& p) {
  std::vector<Interval> state(p.root.begin(), p.root.begin() + p.n);
  ProjectionTree tree{Box(std::move(state))};
  for (std::size_t i = 0; i < p.in.size(); ++i)
    tree.insert(p.in[i].subspan(0, p.n));
  return tree;
}

// ---------------------------------------------------------------------------
// ControlSections

ControlSections ControlSections::build(const Paving& p) {
  if (p.n != 1 || p.m != 1)
    throw std::invalid_argument("control sections require n=1, m=1");
  ControlSections cs;
  std::vector<double> cuts;
  cuts.reserve(p.in.size() * 2);
  for (std::size_t i = 0; i < p.in.size(); ++i) {
    cuts.push_back(p.in[i][0].lo);
    cuts.push_back(p.in[i][0].hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cs.xs_ = cuts;
  if (cuts.size() < 2) return cs;
  cs.us_.resize(cuts.size() - 1);
  // event sweep: boxes sorted by x.lo
  std::vector<std::size_t> order(p.in.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.in[a][0].lo < p.in[b][0].lo;
  });
  std::size_t next = 0;
  std::vector<std::size_t> active;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg], b = cuts[seg + 1];
    while (next < order.size() && p.in[order[next]][0].lo <= a)
      active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t i) { return p.in[i][0].hi < b; });
    std::vector<Interval> us;
    for (std::size_t i : active)
      if (p.in[i][0].lo <= a && p.in[i][0].hi >= b) us.push_back(p.in[i][1]);
    cs.us_[seg] = merge_intervals(std::move(us));
  }
  return cs;
}

std::vector<Interval> ControlSections::controls_at(double x) const {
  std::vector<Interval> out;
  if (xs_.size() < 2 || x < xs_.front() || x > xs_.back()) return out;
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t s = (it == xs_.begin())
                      ? 0
                      : static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (s >= us_.size()) s = us_.size() - 1;  // x == xs_.back()
  out.insert(out.end(), us_[s].begin(), us_[s].end());
  // x on an interior cut belongs to the left segment as well (closed boxes)
  if (s > 0 && xs_[s] == x)
    out.insert(out.end(), us_[s - 1].begin(), us_[s - 1].end());
  return merge_intervals(std::move(out));
}

bool ControlSections::member(double x, double u) const {
  for (const Interval& iv : controls_at(x))
    if (iv.contains(u)) return true;
  return false;
}

}  // namespace rdoa
