// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#include "rdoa/paver.hpp"

#include <omp.h>

#include <stdexcept>
#include <vector>

namespace rdoa {

namespace {

void check_args(const BoxSet& init, const Box& root, int n, int m, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (root.dim() != n + m) throw std::invalid_argument("root dimension mismatch");
  if (!init.empty() && init.dim() != n + m)
    throw std::invalid_argument("init box dimension mismatch");
}

void bisect_into(BoxView b, int k, double mid, std::vector<Interval>& lo_buf,
                 std::vector<Interval>& hi_buf) {
  lo_buf.assign(b.begin(), b.end());
  hi_buf.assign(b.begin(), b.end());
  lo_buf[k].hi = mid;
  hi_buf[k].lo = mid;
}

}  // namespace

Paving pave_serial(const BoxTest& test, const BoxSet& init, const Box& root,
                   int n, int m, double eps, const PaveOptions& opt,
                   PaveStats* stats) {
  check_args(init, root, n, m, eps);
  const int dim = n + m;
  Paving p;
  p.n = n;
  p.m = m;
  p.root = root;
  p.in = BoxSet(dim);
  p.out = BoxSet(dim);
  p.boundary = BoxSet(dim);
  PaveStats local{};

  BoxSet stack(dim);
  stack.append(init);
  std::vector<Interval> lo_buf, hi_buf;
  while (!stack.empty()) {
    const Box w = stack.pop();
    ++local.evaluations;
    switch (test(w)) {
      case BoxClass::Accept:
        p.in.push(w);
        break;
      case BoxClass::Reject:
        local.out_volume += volume(w);
        if (opt.keep_out) p.out.push(w);
        break;
      case BoxClass::Unknown:
        if (width(w) < eps) {
          local.boundary_volume += volume(w);
          if (opt.keep_boundary) p.boundary.push(w);
        } else {
          const int k = widest_dim(w);
          const double mid = split_point(w[k].lo, w[k].hi);
          bisect_into(w, k, mid, lo_buf, hi_buf);
          stack.push(BoxView{hi_buf});
          stack.push(BoxView{lo_buf});
        }
        break;
    }
  }
  p.in.sort_canonical();
  p.out.sort_canonical();
  p.boundary.sort_canonical();
  if (stats) *stats = local;
  return p;
}

Paving pave(const BoxTest& test, const BoxSet& init, const Box& root, int n,
            int m, double eps, const PaveOptions& opt, PaveStats* stats) {
  check_args(init, root, n, m, eps);
  const int dim = n + m;
  Paving p;
  p.n = n;
  p.m = m;
  p.root = root;
  p.in = BoxSet(dim);
  p.out = BoxSet(dim);
  p.boundary = BoxSet(dim);
  PaveStats total{};

  const int max_threads = omp_get_max_threads();
  const int threads = opt.threads > 0 ? std::min(opt.threads, max_threads)
                                      : max_threads;

  BoxSet frontier(dim);
  frontier.append(init);
  struct Shard {
    BoxSet in, out, boundary, next;
    double out_volume = 0.0, boundary_volume = 0.0;
    std::vector<Interval> lo_buf, hi_buf;
    explicit Shard(int d) : in(d), out(d), boundary(d), next(d) {}
  };
  std::vector<Shard> shards;
  shards.reserve(threads);
  for (int t = 0; t < threads; ++t) shards.emplace_back(dim);

  while (!frontier.empty()) {
    const std::int64_t count = static_cast<std::int64_t>(frontier.size());
    total.evaluations += static_cast<std::uint64_t>(count);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
      Shard& sh = shards[omp_get_thread_num()];
      const BoxView w = frontier[static_cast<std::size_t>(i)];
      switch (test(w)) {
        case BoxClass::Accept:
          sh.in.push(w);
          break;
        case BoxClass::Reject:
          sh.out_volume += volume(w);
          if (opt.keep_out) sh.out.push(w);
          break;
        case BoxClass::Unknown:
          if (width(w) < eps) {
            sh.boundary_volume += volume(w);
            if (opt.keep_boundary) sh.boundary.push(w);
          } else {
            const int k = widest_dim(w);
            const double mid = split_point(w[k].lo, w[k].hi);
            bisect_into(w, k, mid, sh.lo_buf, sh.hi_buf);
            sh.next.push(BoxView{sh.lo_buf});
            sh.next.push(BoxView{sh.hi_buf});
          }
          break;
      }
    }
    frontier.clear();
    for (Shard& sh : shards) {
      p.in.append(sh.in);
      p.out.append(sh.out);
      p.boundary.append(sh.boundary);
      frontier.append(sh.next);
      total.out_volume += sh.out_volume;
      total.boundary_volume += sh.boundary_volume;
      sh.in.clear();
      sh.out.clear();
      sh.boundary.clear();
      sh.next.clear();
      sh.out_volume = sh.boundary_volume = 0.0;
    }
  }
  p.in.sort_canonical();
  p.out.sort_canonical();
  p.boundary.sort_canonical();
  if (stats) *stats = total;
  return p;
}

Paving pave_root(const BoxTest& test, const Box& root, int n, int m,
                 double eps, const PaveOptions& opt, PaveStats* stats) {
  BoxSet init(n + m);
  init.push(root.view());
  return pave(test, init, root, n, m, eps, opt, stats);
}

}  // namespace rdoa
