#include "bvpair/expr.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <numbers>

#include "bvpair/error.hpp"

namespace bvpair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_const(const Expr& e, double* v = nullptr) {
  if (e->op != Op::Const) return false;
  if (v) *v = e->value;
  return true;
}

}  // namespace

namespace ex {

Expr constant(double v) {
  Node n;
  n.op = Op::Const;
  n.value = v;
  return make(n);
}

Expr var() {
  Node n;
  n.op = Op::Var;
  return make(n);
}

Expr add(Expr a, Expr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return constant(x + y);
  if (is_const(a, &x) && x == 0.0) return b;
  if (is_const(b, &y) && y == 0.0) return a;
  Node n;
  n.op = Op::Add;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(n);
}

Expr sub(Expr a, Expr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return constant(x - y);
  if (is_const(b, &y) && y == 0.0) return a;
  Node n;
  n.op = Op::Sub;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(n);
}

Expr mul(Expr a, Expr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return constant(x * y);
  if ((is_const(a, &x) && x == 0.0) || (is_const(b, &y) && y == 0.0)) return constant(0.0);
  if (is_const(a, &x) && x == 1.0) return b;
  if (is_const(b, &y) && y == 1.0) return a;
  Node n;
  n.op = Op::Mul;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(n);
}

Expr div(Expr a, Expr b) {
  double x, y;
  if (is_const(a, &x) && is_const(b, &y)) return constant(x / y);
  if (is_const(b, &y) && y == 1.0) return a;
  Node n;
  n.op = Op::Div;
  n.a = std::move(a);
  n.b = std::move(b);
  return make(n);
}

Expr neg(Expr a) {
  double x;
  if (is_const(a, &x)) return constant(-x);
  Node n;
  n.op = Op::Neg;
  n.a = std::move(a);
  return make(n);
}

Expr pow(Expr a, int k) {
  if (k < 0) throw Error(ErrorCode::ParseError, "negative integer powers are not supported");
  if (k == 0) return constant(1.0);
  if (k == 1) return a;
  double x;
  if (is_const(a, &x)) return constant(std::pow(x, k));
  Node n;
  n.op = Op::Pow;
  n.power = k;
  n.a = std::move(a);
  return make(n);
}

namespace {
Expr unary(Op op, Expr a) {
  double x;
  if (is_const(a, &x)) {
    switch (op) {
      case Op::Sin: return constant(std::sin(x));
      case Op::Cos: return constant(std::cos(x));
      case Op::Exp: return constant(std::exp(x));
      case Op::Abs: return constant(std::abs(x));
      default: break;
    }
  }
  Node n;
  n.op = op;
  n.a = std::move(a);
  return make(n);
}
}  // namespace

Expr sin(Expr a) { return unary(Op::Sin, std::move(a)); }
Expr cos(Expr a) { return unary(Op::Cos, std::move(a)); }
Expr exp(Expr a) { return unary(Op::Exp, std::move(a)); }
Expr abs(Expr a) { return unary(Op::Abs, std::move(a)); }

Expr clamp(Expr a, double lo, double hi) {
  if (!(lo <= hi)) throw Error(ErrorCode::ParseError, "clamp requires lo <= hi");
  double x;
  if (is_const(a, &x)) return constant(std::clamp(x, lo, hi));
  Node n;
  n.op = Op::Clamp;
  n.lo = lo;
  n.hi = hi;
  n.a = std::move(a);
  return make(n);
}

Expr relu(Expr a) { return clamp(std::move(a), 0.0, kInf); }

Expr compose_affine(const Expr& e, double scale, double shift) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: return e;
    case Op::Var: return add(mul(constant(scale), var()), constant(shift));
    case Op::Add: return add(compose_affine(n.a, scale, shift), compose_affine(n.b, scale, shift));
    case Op::Sub: return sub(compose_affine(n.a, scale, shift), compose_affine(n.b, scale, shift));
    case Op::Mul: return mul(compose_affine(n.a, scale, shift), compose_affine(n.b, scale, shift));
    case Op::Div: return div(compose_affine(n.a, scale, shift), compose_affine(n.b, scale, shift));
    case Op::Neg: return neg(compose_affine(n.a, scale, shift));
    case Op::Pow: return pow(compose_affine(n.a, scale, shift), n.power);
    case Op::Sin: return sin(compose_affine(n.a, scale, shift));
    case Op::Cos: return cos(compose_affine(n.a, scale, shift));
    case Op::Exp: return exp(compose_affine(n.a, scale, shift));
    case Op::Abs: return abs(compose_affine(n.a, scale, shift));
    case Op::Clamp: return clamp(compose_affine(n.a, scale, shift), n.lo, n.hi);
  }
  return e;
}

}  // namespace ex

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError,
                "column " + std::to_string(pos_ + 1) + ": " + msg + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = ex::add(e, term());
      } else if (accept('-')) {
        e = ex::sub(e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = ex::mul(e, unary());
      } else if (accept('/')) {
        e = ex::div(e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return ex::neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a nonnegative integer literal");
      return ex::pow(base, std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  double number_literal() {
    skip();
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const std::string tmp(s_.substr(pos_));
    const double v = std::strtod(tmp.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
    if (used == 0) fail("expected a number");
    (void)begin;
    pos_ += used;
    return v;
  }

  // Bound argument of clamp: a constant expression.
  double constant_arg() {
    Expr e = expression();
    if (depends_on_var(e)) fail("clamp bounds must be constant");
    return eval(e, 0.0);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ex::constant(number_literal());
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x" || id == "t") return ex::var();
      if (id == "pi") return ex::constant(std::numbers::pi);
      if (id == "inf") return ex::constant(kInf);
      if (id == "sin" || id == "cos" || id == "exp" || id == "abs" || id == "relu") {
        expect('(');
        Expr a = expression();
        expect(')');
        if (id == "sin") return ex::sin(a);
        if (id == "cos") return ex::cos(a);
        if (id == "exp") return ex::exp(a);
        if (id == "abs") return ex::abs(a);
        return ex::relu(a);
      }
      if (id == "clamp") {
        expect('(');
        Expr a = expression();
        expect(',');
        const double lo = constant_arg();
        expect(',');
        const double hi = constant_arg();
        expect(')');
        if (!(lo <= hi)) fail("clamp requires lo <= hi");
        return ex::clamp(a, lo, hi);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "(-inf)";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) return "(" + s + ")";
  return s;
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: return fmt_double(n.value);
    case Op::Var: return "x";
    case Op::Add: return "(" + to_string(n.a) + " + " + to_string(n.b) + ")";
    case Op::Sub: return "(" + to_string(n.a) + " - " + to_string(n.b) + ")";
    case Op::Mul: return "(" + to_string(n.a) + " * " + to_string(n.b) + ")";
    case Op::Div: return "(" + to_string(n.a) + " / " + to_string(n.b) + ")";
    case Op::Neg: return "(-" + to_string(n.a) + ")";
    case Op::Pow: return "(" + to_string(n.a) + ")^" + std::to_string(n.power);
    case Op::Sin: return "sin(" + to_string(n.a) + ")";
    case Op::Cos: return "cos(" + to_string(n.a) + ")";
    case Op::Exp: return "exp(" + to_string(n.a) + ")";
    case Op::Abs: return "abs(" + to_string(n.a) + ")";
    case Op::Clamp: return "clamp(" + to_string(n.a) + ", " + fmt_double(n.lo) + ", " + fmt_double(n.hi) + ")";
  }
  return "0";
}

bool depends_on_var(const Expr& e) {
  if (e->op == Op::Var) return true;
  if (e->a && depends_on_var(e->a)) return true;
  if (e->b && depends_on_var(e->b)) return true;
  return false;
}

// ------------------------------------------------------- polynomial forms

namespace {

using Poly = std::vector<double>;

Poly padd(const Poly& p, const Poly& q, double sign) {
  Poly r(std::max(p.size(), q.size()), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (std::size_t i = 0; i < q.size(); ++i) r[i] += sign * q[i];
  return r;
}

Poly pmul(const Poly& p, const Poly& q) {
  Poly r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Expr poly_expr(const Poly& p) {
  Expr e = ex::constant(0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    Expr term = i == 0 ? ex::constant(p[i]) : ex::mul(ex::constant(p[i]), ex::pow(ex::var(), static_cast<int>(i)));
    e = ex::add(e, term);
  }
  return e;
}

std::optional<Expr> raw_antiderivative(const Expr& e);

// Primitive of f(a v + b) given a primitive H of f: H(a v + b) / a.
Expr affine_primitive(const Expr& outer_primitive, double a, double b) {
  return ex::div(ex::compose_affine(outer_primitive, a, b), ex::constant(a));
}

std::optional<Expr> raw_antiderivative(const Expr& e) {
  if (auto p = as_polynomial(e)) {
    Poly q(p->size() + 1, 0.0);
    for (std::size_t i = 0; i < p->size(); ++i) q[i + 1] = (*p)[i] / static_cast<double>(i + 1);
    return poly_expr(q);
  }
  const Node& n = *e;
  switch (n.op) {
    case Op::Add:
    case Op::Sub: {
      auto a = raw_antiderivative(n.a);
      auto b = raw_antiderivative(n.b);
      if (!a || !b) return std::nullopt;
      return n.op == Op::Add ? ex::add(*a, *b) : ex::sub(*a, *b);
    }
    case Op::Neg: {
      auto a = raw_antiderivative(n.a);
      if (!a) return std::nullopt;
      return ex::neg(*a);
    }
    case Op::Mul: {
      if (!depends_on_var(n.a)) {
        auto b = raw_antiderivative(n.b);
        if (!b) return std::nullopt;
        return ex::mul(n.a, *b);
      }
      if (!depends_on_var(n.b)) {
        auto a = raw_antiderivative(n.a);
        if (!a) return std::nullopt;
        return ex::mul(*a, n.b);
      }
      return std::nullopt;
    }
    case Op::Div: {
      if (depends_on_var(n.b)) return std::nullopt;
      auto a = raw_antiderivative(n.a);
      if (!a) return std::nullopt;
      return ex::div(*a, n.b);
    }
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Clamp: {
      auto p = as_polynomial(n.a);
      if (!p || p->size() > 2) return std::nullopt;
      const double b = (*p)[0];
      const double a = p->size() == 2 ? (*p)[1] : 0.0;
      if (a == 0.0) return ex::mul(ex::constant(eval(e, 0.0)), ex::var());
      Expr h;
      const Expr y = ex::var();
      if (n.op == Op::Sin) h = ex::neg(ex::cos(y));
      if (n.op == Op::Cos) h = ex::sin(y);
      if (n.op == Op::Exp) h = ex::exp(y);
      if (n.op == Op::Clamp) {
        // d/dy of y^2/2 - relu(y-hi)^2/2 - relu(lo-y)^2/2 is clamp(y, lo, hi).
        h = ex::div(ex::pow(y, 2), ex::constant(2.0));
        if (std::isfinite(n.hi))
          h = ex::sub(h, ex::div(ex::pow(ex::relu(ex::sub(y, ex::constant(n.hi))), 2), ex::constant(2.0)));
        if (std::isfinite(n.lo))
          h = ex::sub(h, ex::div(ex::pow(ex::relu(ex::sub(ex::constant(n.lo), y)), 2), ex::constant(2.0)));
      }
      return affine_primitive(h, a, b);
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<std::vector<double>> as_polynomial(const Expr& e) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: return Poly{n.value};
    case Op::Var: return Poly{0.0, 1.0};
    case Op::Add:
    case Op::Sub: {
      auto a = as_polynomial(n.a);
      auto b = as_polynomial(n.b);
      if (!a || !b) return std::nullopt;
      return padd(*a, *b, n.op == Op::Add ? 1.0 : -1.0);
    }
    case Op::Neg: {
      auto a = as_polynomial(n.a);
      if (!a) return std::nullopt;
      for (double& c : *a) c = -c;
      return a;
    }
    case Op::Mul: {
      auto a = as_polynomial(n.a);
      auto b = as_polynomial(n.b);
      if (!a || !b) return std::nullopt;
      return pmul(*a, *b);
    }
    case Op::Div: {
      if (depends_on_var(n.b)) return std::nullopt;
      auto a = as_polynomial(n.a);
      if (!a) return std::nullopt;
      const double d = eval(n.b, 0.0);
      for (double& c : *a) c /= d;
      return a;
    }
    case Op::Pow: {
      auto a = as_polynomial(n.a);
      if (!a) return std::nullopt;
      Poly r{1.0};
      for (int i = 0; i < n.power; ++i) r = pmul(r, *a);
      return r;
    }
    default:
      if (!depends_on_var(e)) return Poly{eval(e, 0.0)};
      return std::nullopt;
  }
}

std::optional<Expr> antiderivative(const Expr& e) {
  auto raw = raw_antiderivative(e);
  if (!raw) return std::nullopt;
  const double at0 = eval(*raw, 0.0);
  if (at0 == 0.0) return raw;
  return ex::sub(*raw, ex::constant(at0));
}

double sup_abs(const Expr& e, double a, double b, int splits) {
  double best = 0.0;
  const double h = (b - a) / splits;
  for (int i = 0; i < splits; ++i) {
    const double l = a + h * i;
    const double r = i + 1 == splits ? b : a + h * (i + 1);
    best = std::max(best, eval_range(e, ia::Interval{l, r}).mag());
  }
  return best;
}

double sup_abs_deriv(const Expr& e, double a, double b, int splits) {
  double best = 0.0;
  const double h = (b - a) / splits;
  for (int i = 0; i < splits; ++i) {
    const double l = a + h * i;
    const double r = i + 1 == splits ? b : a + h * (i + 1);
    best = std::max(best, deriv_range(e, ia::Interval{l, r}).mag());
  }
  return best;
}

}  // namespace bvpair
