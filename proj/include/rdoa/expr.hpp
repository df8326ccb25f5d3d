// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RDOA_EXPR_HPP
#define RDOA_EXPR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdoa/box.hpp"
#include "rdoa/interval.hpp"

namespace rdoa {

struct ParseError : std::runtime_error {
  ParseError(int line_, int col_, const std::string& what_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar expression over state variables x1..xn and control variables
/// u1..um. Parsed once into a postfix program; evaluation is re-entrant
/// and allocation-free.
///
/// Grammar: + - * / ^ (integer exponent), unary -, parentheses, and the
/// functions sin, cos, exp, sqr, abs. Precedence ^ > unary- > * / > + -,
/// left-associative, whitespace-insensitive.
class Expr {
 public:
  enum class Op : std::uint8_t {
    Const, VarX, VarU, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sqr, Abs
  };
  struct Instr {
    Op op;
    std::int32_t arg = 0;
    double value = 0.0;
  };

  Expr() = default;

  /// Throws ParseError with line/column on syntax errors, unknown
  /// identifiers, and out-of-range variable indices.
  static Expr parse(std::string_view src, int n, int m);
  static Expr constant(double v);

  int n() const { return n_; }
  int m() const { return m_; }
  const std::string& source() const { return src_; }
  bool uses_control() const;

  /// Real evaluation. Throws EvalError on domain errors (division by zero,
  /// zero to a negative power).
  double eval(std::span<const double> x, std::span<const double> u) const;

  /// Natural-form inclusion function over the box w = (x-part, u-part).
  /// Never throws; singular operations give unbounded intervals.
  Interval eval(BoxView w) const;

  /// Mean-value (centered) form intersected with the natural form.
  Interval eval_centered(BoxView w) const;

  /// Forward-mode gradient at a point; gx/gu must have size n/m.
  void gradient(std::span<const double> x, std::span<const double> u,
                std::span<double> gx, std::span<double> gu) const;

  /// Interval enclosure of the partial derivative over w for one coordinate
  /// (0..n-1 state, n..n+m-1 control).
  Interval derivative_range(BoxView w, int dim) const;

  /// Replaces every control variable u_j by the linear form sum_k K[j][k]*x_k,
  /// giving a state-only expression (used for closed-loop analysis).
  Expr substitute_control(const std::vector<std::vector<double>>& gain) const;

  const std::vector<Instr>& program() const { return prog_; }

 private:
  std::vector<Instr> prog_;
  int n_ = 0;
  int m_ = 0;
  int max_stack_ = 0;
  std::string src_;

  friend class ExprParser;
};

/// Adaptive range enclosure of e over `domain`: the domain is recursively
/// split (widest-coordinate pieces, centered-and-natural bounds per piece) as
/// long as neither decision threshold is met and the piece budget lasts.
/// Refinement stops early once hull.hi <= accept_hi or hull.lo > reject_lo.
struct RangeOptions {
  double accept_hi = -std::numeric_limits<double>::infinity();
  double reject_lo = std::numeric_limits<double>::infinity();
  int budget = 96;
};
Interval eval_range_refined(const Expr& e, BoxView domain,
                            const RangeOptions& opt);

}  // namespace rdoa

#endif  // RDOA_EXPR_HPP
