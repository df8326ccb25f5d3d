// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RDOA_PAVER_HPP
#define RDOA_PAVER_HPP

#include <cstdint>
#include <functional>

#include "rdoa/paving.hpp"

namespace rdoa {

enum class BoxClass : std::uint8_t { Accept, Reject, Unknown };

/// Pure, thread-safe classification callback. Soundness contract:
/// Accept => box is inside the target set, Reject => box does not meet it.
using BoxTest = std::function<BoxClass(BoxView)>;

struct PaveOptions {
  int threads = 0;          ///< 0: library default
  bool keep_out = true;     ///< drop rejected boxes to save memory
  bool keep_boundary = true;
};

struct PaveStats {
  std::uint64_t evaluations = 0;
  double out_volume = 0.0;
  double boundary_volume = 0.0;
};

/// Branch-and-classify paver: Accept -> in, Reject -> out, width < eps ->
/// boundary, else bisect. Result lists are canonically sorted, so the output
/// is independent of scheduling. Throws std::invalid_argument for eps <= 0.
///
/// OpenMP level-synchronous worklist; identical classifications to
/// pave_serial by construction (the test is pure and bisection is
/// deterministic).
Paving pave(const BoxTest& test, const BoxSet& init, const Box& root, int n,
            int m, double eps, const PaveOptions& opt = {},
            PaveStats* stats = nullptr);

/// Depth-first serial reference implementation (kept for testing and as the
/// baseline in the paver benchmark).
Paving pave_serial(const BoxTest& test, const BoxSet& init, const Box& root,
                   int n, int m, double eps, const PaveOptions& opt = {},
                   PaveStats* stats = nullptr);

/// Convenience: single-root initial list.
Paving pave_root(const BoxTest& test, const Box& root, int n, int m,
                 double eps, const PaveOptions& opt = {},
                 PaveStats* stats = nullptr);

}  // namespace rdoa

#endif  // RDOA_PAVER_HPP
