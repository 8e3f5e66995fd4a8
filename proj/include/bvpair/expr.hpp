#pragma once

// Closed-form expression trees in one variable. Scenario files describe field
// coefficients, primitives and test functions with these; the same tree is
// evaluated on doubles, on intervals (certified bounds) and on duals
// (derivatives).

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvpair/ia.hpp"

namespace bvpair {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Abs, Clamp };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  double value = 0.0;  // Const
  int power = 0;       // Pow
  double lo = 0.0;     // Clamp bounds, may be infinite
  double hi = 0.0;
  Expr a;
  Expr b;
};

namespace ex {

Expr constant(double v);
Expr var();
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr pow(Expr a, int n);
Expr sin(Expr a);
Expr cos(Expr a);
Expr exp(Expr a);
Expr abs(Expr a);
Expr clamp(Expr a, double lo, double hi);
Expr relu(Expr a);

// Affine substitution e(scale * v + shift).
Expr compose_affine(const Expr& e, double scale, double shift);

}  // namespace ex

// Parses an expression in the variable `x` or `t` (both denote the single
// variable). Supports + - * / ^(integer), unary minus, pi, inf and the
// functions sin cos exp abs clamp(e, lo, hi) relu(e). Throws PARSE_ERROR.
Expr parse_expr(std::string_view text);

std::string to_string(const Expr& e);

bool depends_on_var(const Expr& e);

// Coefficients c0 + c1 v + ... when the tree is a polynomial.
std::optional<std::vector<double>> as_polynomial(const Expr& e);

// Primitive vanishing at 0, or nullopt when the form is not supported.
std::optional<Expr> antiderivative(const Expr& e);

namespace detail {

template <class T> T lift(double v) {
  if constexpr (std::is_same_v<T, ia::Dual<double>>) {
    return T{v, 0.0};
  } else if constexpr (std::is_same_v<T, ia::Dual<ia::Interval>>) {
    return T{ia::Interval{v}, ia::Interval{0.0}};
  } else {
    return T(v);
  }
}

}  // namespace detail

template <class T>
T eval_as(const Node& n, const T& v) {
  using std::abs, std::cos, std::exp, std::sin;
  using ia::abs, ia::clamp, ia::cos, ia::exp, ia::powi, ia::sin;
  switch (n.op) {
    case Op::Const: return detail::lift<T>(n.value);
    case Op::Var: return v;
    case Op::Add: return eval_as(*n.a, v) + eval_as(*n.b, v);
    case Op::Sub: return eval_as(*n.a, v) - eval_as(*n.b, v);
    case Op::Mul: return eval_as(*n.a, v) * eval_as(*n.b, v);
    case Op::Div: return eval_as(*n.a, v) / eval_as(*n.b, v);
    case Op::Neg: return -eval_as(*n.a, v);
    case Op::Pow: return powi(eval_as(*n.a, v), n.power);
    case Op::Sin: return sin(eval_as(*n.a, v));
    case Op::Cos: return cos(eval_as(*n.a, v));
    case Op::Exp: return exp(eval_as(*n.a, v));
    case Op::Abs: return abs(eval_as(*n.a, v));
    case Op::Clamp: return clamp(eval_as(*n.a, v), n.lo, n.hi);
  }
  return detail::lift<T>(0.0);
}

inline double eval(const Expr& e, double v) { return eval_as<double>(*e, v); }
inline double deriv(const Expr& e, double v) { return eval_as(*e, ia::Dual<double>{v, 1.0}).d; }
inline ia::Interval eval_range(const Expr& e, ia::Interval v) { return eval_as(*e, v); }
inline ia::Interval deriv_range(const Expr& e, ia::Interval v) {
  return eval_as(*e, ia::Dual<ia::Interval>{v, ia::Interval{1.0}}).d;
}

// Certified bound on sup |e| over [a, b] by interval evaluation on `splits`
// equal subintervals.
double sup_abs(const Expr& e, double a, double b, int splits = 64);
// Certified bound on sup |e'| over [a, b].
double sup_abs_deriv(const Expr& e, double a, double b, int splits = 64);

}  // namespace bvpair
