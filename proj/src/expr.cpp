// Copyright (c) rdoa contributors.
// SPDX-License-Identifier: Apache-2.0

#include "rdoa/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace rdoa {

namespace {

constexpr int kMaxStack = 64;

// ---------------------------------------------------------------------------
// evaluation value types

template <class T>
struct Dual1 {
  T v;
  T d;
};

// double ops
inline double op_add(double a, double b) { return a + b; }
inline double op_sub(double a, double b) { return a - b; }
inline double op_mul(double a, double b) { return a * b; }
inline double op_div(double a, double b) {
  if (b == 0.0) throw EvalError("division by zero");
  return a / b;
}
inline double op_neg(double a) { return -a; }
inline double op_sin(double a) { return std::sin(a); }
inline double op_cos(double a) { return std::cos(a); }
inline double op_exp(double a) { return std::exp(a); }
inline double op_sqr(double a) { return a * a; }
inline double op_abs(double a) { return std::abs(a); }
inline double op_pow(double a, int k) {
  if (a == 0.0 && k < 0) throw EvalError("zero to a negative power");
  return std::pow(a, k);
}

// interval ops
inline Interval op_add(const Interval& a, const Interval& b) { return a + b; }
inline Interval op_sub(const Interval& a, const Interval& b) { return a - b; }
inline Interval op_mul(const Interval& a, const Interval& b) { return a * b; }
inline Interval op_div(const Interval& a, const Interval& b) { return a / b; }
inline Interval op_neg(const Interval& a) { return -a; }
inline Interval op_sin(const Interval& a) { return sin(a); }
inline Interval op_cos(const Interval& a) { return cos(a); }
inline Interval op_exp(const Interval& a) { return exp(a); }
inline Interval op_sqr(const Interval& a) { return sqr(a); }
inline Interval op_abs(const Interval& a) { return abs(a); }
inline Interval op_pow(const Interval& a, int k) { return pow_int(a, k); }

// dual ops (chain rule); T is double or Interval
template <class T>
inline Dual1<T> op_add(const Dual1<T>& a, const Dual1<T>& b) {
  return {op_add(a.v, b.v), op_add(a.d, b.d)};
}
template <class T>
inline Dual1<T> op_sub(const Dual1<T>& a, const Dual1<T>& b) {
  return {op_sub(a.v, b.v), op_sub(a.d, b.d)};
}
template <class T>
inline Dual1<T> op_mul(const Dual1<T>& a, const Dual1<T>& b) {
  return {op_mul(a.v, b.v), op_add(op_mul(a.d, b.v), op_mul(a.v, b.d))};
}
template <class T>
inline Dual1<T> op_div(const Dual1<T>& a, const Dual1<T>& b) {
  const T q = op_div(a.v, b.v);
  return {q, op_div(op_sub(a.d, op_mul(q, b.d)), b.v)};
}
template <class T>
inline Dual1<T> op_neg(const Dual1<T>& a) {
  return {op_neg(a.v), op_neg(a.d)};
}
template <class T>
inline Dual1<T> op_sin(const Dual1<T>& a) {
  return {op_sin(a.v), op_mul(op_cos(a.v), a.d)};
}
template <class T>
inline Dual1<T> op_cos(const Dual1<T>& a) {
  return {op_cos(a.v), op_neg(op_mul(op_sin(a.v), a.d))};
}
template <class T>
inline Dual1<T> op_exp(const Dual1<T>& a) {
  const T e = op_exp(a.v);
  return {e, op_mul(e, a.d)};
}
inline Dual1<double> op_sqr(const Dual1<double>& a) {
  return {a.v * a.v, 2.0 * a.v * a.d};
}
inline Dual1<Interval> op_sqr(const Dual1<Interval>& a) {
  return {sqr(a.v), Interval::point(2.0) * a.v * a.d};
}
inline Dual1<double> op_abs(const Dual1<double>& a) {
  const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
  return {std::abs(a.v), s * a.d};
}
inline Dual1<Interval> op_abs(const Dual1<Interval>& a) {
  Interval s{-1.0, 1.0};
  if (a.v.lo > 0.0) s = Interval::point(1.0);
  else if (a.v.hi < 0.0) s = Interval::point(-1.0);
  return {abs(a.v), s * a.d};
}
inline Dual1<double> op_pow(const Dual1<double>& a, int k) {
  return {op_pow(a.v, k), k * op_pow(a.v, k - 1) * a.d};
}
inline Dual1<Interval> op_pow(const Dual1<Interval>& a, int k) {
  return {pow_int(a.v, k),
          Interval::point(k) * pow_int(a.v, k - 1) * a.d};
}

template <class T>
T run_program(const std::vector<Expr::Instr>& prog,
              std::span<const T> vars_x, std::span<const T> vars_u,
              const T& const_proto) {
  std::array<T, kMaxStack> st;
  int sp = 0;
  for (const auto& ins : prog) {
    using Op = Expr::Op;
    switch (ins.op) {
      case Op::Const: {
        T c = const_proto;
        if constexpr (std::is_same_v<T, double>) c = ins.value;
        else if constexpr (std::is_same_v<T, Interval>) c = Interval::point(ins.value);
        else if constexpr (std::is_same_v<T, Dual1<double>>) c = {ins.value, 0.0};
        else c = {Interval::point(ins.value), Interval::point(0.0)};
        st[sp++] = c;
        break;
      }
      case Op::VarX: st[sp++] = vars_x[ins.arg]; break;
      case Op::VarU: st[sp++] = vars_u[ins.arg]; break;
      case Op::Add: --sp; st[sp - 1] = op_add(st[sp - 1], st[sp]); break;
      case Op::Sub: --sp; st[sp - 1] = op_sub(st[sp - 1], st[sp]); break;
      case Op::Mul: --sp; st[sp - 1] = op_mul(st[sp - 1], st[sp]); break;
      case Op::Div: --sp; st[sp - 1] = op_div(st[sp - 1], st[sp]); break;
      case Op::Neg: st[sp - 1] = op_neg(st[sp - 1]); break;
      case Op::Pow: st[sp - 1] = op_pow(st[sp - 1], ins.arg); break;
      case Op::Sin: st[sp - 1] = op_sin(st[sp - 1]); break;
      case Op::Cos: st[sp - 1] = op_cos(st[sp - 1]); break;
      case Op::Exp: st[sp - 1] = op_exp(st[sp - 1]); break;
      case Op::Sqr: st[sp - 1] = op_sqr(st[sp - 1]); break;
      case Op::Abs: st[sp - 1] = op_abs(st[sp - 1]); break;
    }
  }
  return st[0];
}

}  // namespace

// ---------------------------------------------------------------------------
// parser

class ExprParser {
 public:
  ExprParser(std::string_view src, int n, int m) : src_(src), n_(n), m_(m) {}

  Expr parse() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      fail("empty expression");
    parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected trailing input");
    Expr e;
    e.prog_ = std::move(prog_);
    e.n_ = n_;
    e.m_ = m_;
    e.max_stack_ = max_depth_;
    e.src_ = std::string(src_);
    return e;
  }

 private:
  std::string_view src_;
  int n_, m_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int depth_ = 0, max_depth_ = 0;
  std::vector<Expr::Instr> prog_;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line_, col_, msg);
  }

  void advance(size_t k = 1) {
    for (size_t i = 0; i < k && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') { ++line_; col_ = 1; }
      else ++col_;
    }
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }

  char peek() { skip_ws(); return pos_ < src_.size() ? src_[pos_] : '\0'; }

  bool accept(char c) {
    if (peek() == c) { advance(); return true; }
    return false;
  }

  void emit(Expr::Op op, int arg = 0, double value = 0.0) {
    prog_.push_back({op, arg, value});
    switch (op) {
      case Expr::Op::Const:
      case Expr::Op::VarX:
      case Expr::Op::VarU:
        ++depth_;
        max_depth_ = std::max(max_depth_, depth_);
        if (max_depth_ > kMaxStack) fail("expression too deep");
        break;
      case Expr::Op::Add:
      case Expr::Op::Sub:
      case Expr::Op::Mul:
      case Expr::Op::Div:
        --depth_;
        break;
      default:
        break;  // unary: depth unchanged
    }
  }

  void parse_expr() {
    parse_term();
    while (true) {
      if (accept('+')) { parse_term(); emit(Expr::Op::Add); }
      else if (accept('-')) { parse_term(); emit(Expr::Op::Sub); }
      else break;
    }
  }

  void parse_term() {
    parse_factor();
    while (true) {
      if (accept('*')) { parse_factor(); emit(Expr::Op::Mul); }
      else if (accept('/')) { parse_factor(); emit(Expr::Op::Div); }
      else break;
    }
  }

  void parse_factor() {
    if (accept('-')) { parse_factor(); emit(Expr::Op::Neg); }
    else parse_power();
  }

  void parse_power() {
    parse_primary();
    while (accept('^')) {
      emit(Expr::Op::Pow, parse_int_literal());
    }
  }

  int parse_int_literal() {
    skip_ws();
    int sign = 1;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      if (src_[pos_] == '-') sign = -1;
      advance();
    }
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      fail("expected integer exponent after '^'");
    long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_] - '0');
      if (v > 1000) fail("exponent too large");
      advance();
    }
    return static_cast<int>(sign * v);
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      advance();
      parse_expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      parse_identifier();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void parse_number() {
    const size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      advance();
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        fail("malformed exponent in number");
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
    }
    const std::string tok(src_.substr(start, pos_ - start));
    try {
      emit(Expr::Op::Const, 0, std::stod(tok));
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
  }

  void parse_identifier() {
    const size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      advance();
    const std::string_view id = src_.substr(start, pos_ - start);

    // variable: x<k> or u<k>, 1-based
    if ((id[0] == 'x' || id[0] == 'u') && id.size() > 1 &&
        std::all_of(id.begin() + 1, id.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const int idx = std::stoi(std::string(id.substr(1)));
      const int limit = id[0] == 'x' ? n_ : m_;
      if (idx < 1 || idx > limit)
        fail(std::string(id) + " out of range");
      emit(id[0] == 'x' ? Expr::Op::VarX : Expr::Op::VarU, idx - 1);
      return;
    }

    Expr::Op fn;
    if (id == "sin") fn = Expr::Op::Sin;
    else if (id == "cos") fn = Expr::Op::Cos;
    else if (id == "exp") fn = Expr::Op::Exp;
    else if (id == "sqr") fn = Expr::Op::Sqr;
    else if (id == "abs") fn = Expr::Op::Abs;
    else fail("unknown identifier '" + std::string(id) + "'");

    if (!accept('(')) fail("expected '(' after function name");
    parse_expr();
    if (!accept(')')) fail("expected ')'");
    emit(fn);
  }
};

Expr Expr::parse(std::string_view src, int n, int m) {
  return ExprParser(src, n, m).parse();
}

Expr Expr::constant(double v) {
  Expr e;
  e.prog_.push_back({Op::Const, 0, v});
  e.max_stack_ = 1;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  e.src_ = buf;
  return e;
}

bool Expr::uses_control() const {
  for (const auto& ins : prog_)
    if (ins.op == Op::VarU) return true;
  return false;
}

double Expr::eval(std::span<const double> x, std::span<const double> u) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(u.size()) != m_)
    throw EvalError("evaluation point dimension mismatch");
  return run_program<double>(prog_, x, u, 0.0);
}

Interval Expr::eval(BoxView w) const {
  if (static_cast<int>(w.size()) != n_ + m_)
    throw EvalError("evaluation box dimension mismatch");
  return run_program<Interval>(prog_, w.subspan(0, n_), w.subspan(n_),
                               Interval{});
}

void Expr::gradient(std::span<const double> x, std::span<const double> u,
                    std::span<double> gx, std::span<double> gu) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(u.size()) != m_ ||
      gx.size() != x.size() || gu.size() != u.size())
    throw EvalError("gradient dimension mismatch");
  std::vector<Dual1<double>> dx(n_), du(m_);
  for (int dim = 0; dim < n_ + m_; ++dim) {
    for (int i = 0; i < n_; ++i) dx[i] = {x[i], dim == i ? 1.0 : 0.0};
    for (int j = 0; j < m_; ++j) du[j] = {u[j], dim == n_ + j ? 1.0 : 0.0};
    const auto r = run_program<Dual1<double>>(prog_, dx, du, {0.0, 0.0});
    if (dim < n_) gx[dim] = r.d;
    else gu[dim - n_] = r.d;
  }
}

Interval Expr::derivative_range(BoxView w, int dim) const {
  std::vector<Dual1<Interval>> dx(n_), du(m_);
  for (int i = 0; i < n_; ++i)
    dx[i] = {w[i], Interval::point(dim == i ? 1.0 : 0.0)};
  for (int j = 0; j < m_; ++j)
    du[j] = {w[n_ + j], Interval::point(dim == n_ + j ? 1.0 : 0.0)};
  return run_program<Dual1<Interval>>(prog_, dx, du, {Interval{}, Interval{}})
      .d;
}

Interval Expr::eval_centered(BoxView w) const {
  const Interval natural = eval(w);
  // midpoint value as a degenerate-box interval evaluation
  std::vector<Interval> mid(w.size());
  for (size_t i = 0; i < w.size(); ++i) mid[i] = Interval::point(w[i].mid());
  Interval acc = eval(BoxView{mid});
  std::vector<Dual1<Interval>> dx(n_), du(m_);
  for (int i = 0; i < n_; ++i) dx[i] = {w[i], Interval::point(0.0)};
  for (int j = 0; j < m_; ++j) du[j] = {w[n_ + j], Interval::point(0.0)};
  for (int dim = 0; dim < n_ + m_; ++dim) {
    if (w[dim].width() == 0.0) continue;
    if (dim < n_) dx[dim].d = Interval::point(1.0);
    else du[dim - n_].d = Interval::point(1.0);
    const auto r =
        run_program<Dual1<Interval>>(prog_, dx, du, {Interval{}, Interval{}});
    if (dim < n_) dx[dim].d = Interval::point(0.0);
    else du[dim - n_].d = Interval::point(0.0);
    const double c = mid[dim].lo;
    acc = acc + r.d * (w[dim] - Interval::point(c));
  }
  const Interval out = intersect(natural, acc);
  return out.is_empty() ? natural : out;
}

Expr Expr::substitute_control(
    const std::vector<std::vector<double>>& gain) const {
  if (static_cast<int>(gain.size()) != m_)
    throw EvalError("gain row count does not match control dimension");
  Expr e;
  e.n_ = n_;
  e.m_ = 0;
  e.src_ = src_ + " [closed-loop]";
  for (const auto& ins : prog_) {
    if (ins.op != Op::VarU) {
      e.prog_.push_back(ins);
      continue;
    }
    const auto& row = gain[ins.arg];
    if (static_cast<int>(row.size()) != n_)
      throw EvalError("gain column count does not match state dimension");
    // emit sum_k row[k]*x_k
    bool first = true;
    for (int k = 0; k < n_; ++k) {
      e.prog_.push_back({Op::Const, 0, row[k]});
      e.prog_.push_back({Op::VarX, k, 0.0});
      e.prog_.push_back({Op::Mul, 0, 0.0});
      if (!first) e.prog_.push_back({Op::Add, 0, 0.0});
      first = false;
    }
  }
  int depth = 0;
  e.max_stack_ = 0;
  for (const auto& ins : e.prog_) {
    switch (ins.op) {
      case Op::Const: case Op::VarX: case Op::VarU: ++depth; break;
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: --depth; break;
      default: break;
    }
    e.max_stack_ = std::max(e.max_stack_, depth);
  }
  if (e.max_stack_ > kMaxStack) throw EvalError("substituted expression too deep");
  return e;
}

// ---------------------------------------------------------------------------
// adaptive range refinement

Interval eval_range_refined(const Expr& e, BoxView domain,
                            const RangeOptions& opt) {
  struct Piece {
    Box box;
    Interval bound;
  };
  std::vector<Piece> pieces;
  pieces.push_back({Box(domain), e.eval_centered(domain)});
  const double wmin = 1e-9 * std::max(width(domain), 1e-30);

  for (int round = 0;; ++round) {
    double ghi = -std::numeric_limits<double>::infinity();
    double glo = std::numeric_limits<double>::infinity();
    size_t ihi = 0, ilo = 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].bound.hi > ghi) { ghi = pieces[i].bound.hi; ihi = i; }
      if (pieces[i].bound.lo < glo) { glo = pieces[i].bound.lo; ilo = i; }
    }
    if (ghi <= opt.accept_hi) return {glo, ghi};
    if (glo > opt.reject_lo) return {glo, ghi};
    if (static_cast<int>(pieces.size()) >= opt.budget) return {glo, ghi};

    const size_t target = (round % 2 == 0) ? ihi : ilo;
    BoxView tb = pieces[target].box;
    if (width(tb) < wmin) return {glo, ghi};
    auto halves = bisect(tb);
    pieces[target] = {halves.first, e.eval_centered(halves.first)};
    pieces.push_back({halves.second, e.eval_centered(halves.second)});
  }
}

}  // namespace rdoa
