#pragma once

// Outward-rounded interval arithmetic and forward-mode dual numbers. Both are
// used to evaluate expression trees: intervals give certified range and
// Lipschitz bounds, duals give exact pointwise derivatives.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bvpair::ia {

inline double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline Interval operator+(Interval a, Interval b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
inline Interval operator-(Interval a, Interval b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = p[0], hi = p[0];
  for (double v : p) {
    if (std::isnan(v)) v = 0.0;  // 0 * inf
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {down(lo), up(hi)};
}

inline Interval operator/(Interval a, Interval b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  return a * Interval{down(1.0 / b.hi), up(1.0 / b.lo)};
}

inline Interval exp(Interval a) { return {std::max(0.0, down(std::exp(a.lo))), up(std::exp(a.hi))}; }

inline Interval abs(Interval a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval powi(Interval a, int n) {
  if (n == 0) return Interval{1.0};
  const double l = std::pow(a.lo, n);
  const double h = std::pow(a.hi, n);
  if (n % 2 == 1) return {down(l), up(h)};
  if (a.lo >= 0.0) return {down(l), up(h)};
  if (a.hi <= 0.0) return {down(h), up(l)};
  return {0.0, up(std::max(l, h))};
}

// Range of sin over [lo, hi], using the critical points pi/2 + k*pi.
inline Interval sin(Interval a) {
  constexpr double pi = std::numbers::pi;
  if (!(a.hi - a.lo < 2.0 * pi)) return {-1.0, 1.0};
  double lo = std::min(std::sin(a.lo), std::sin(a.hi));
  double hi = std::max(std::sin(a.lo), std::sin(a.hi));
  // Maxima at pi/2 + 2k*pi, minima at -pi/2 + 2k*pi.
  const double kmax = std::ceil((a.lo - pi / 2.0) / (2.0 * pi));
  if (pi / 2.0 + 2.0 * pi * kmax <= a.hi) hi = 1.0;
  const double kmin = std::ceil((a.lo + pi / 2.0) / (2.0 * pi));
  if (-pi / 2.0 + 2.0 * pi * kmin <= a.hi) lo = -1.0;
  return {std::max(-1.0, down(lo)), std::min(1.0, up(hi))};
}

inline Interval cos(Interval a) { return sin(a + Interval{std::numbers::pi / 2.0}); }

inline Interval clamp(Interval a, double lo, double hi) {
  return {std::clamp(a.lo, lo, hi), std::clamp(a.hi, lo, hi)};
}

// Scalar helpers with the same names so templated evaluators work on double.
inline double powi(double a, int n) { return std::pow(a, n); }
inline double clamp(double a, double lo, double hi) { return std::clamp(a, lo, hi); }

template <class T>
struct Dual {
  T v{};
  T d{};
};

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::cos, std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::cos, std::sin;
  return {cos(a.v), -(sin(a.v) * a.d)};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> powi(const Dual<T>& a, int n) {
  if (n == 0) return {T{1.0}, T{0.0}};
  return {powi(a.v, n), T{static_cast<double>(n)} * powi(a.v, n - 1) * a.d};
}

inline Dual<double> abs(const Dual<double>& a) {
  const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
  return {std::abs(a.v), s * a.d};
}
inline Dual<Interval> abs(const Dual<Interval>& a) {
  Interval s = a.v.lo > 0.0 ? Interval{1.0} : (a.v.hi < 0.0 ? Interval{-1.0} : Interval{-1.0, 1.0});
  return {abs(a.v), s * a.d};
}

// Derivative of clamp is 1 strictly inside (lo, hi) and 0 outside; at the kinks
// the right derivative is used for points and the hull for intervals.
inline Dual<double> clamp(const Dual<double>& a, double lo, double hi) {
  const bool inside = a.v >= lo && a.v < hi;
  return {std::clamp(a.v, lo, hi), inside ? a.d : 0.0};
}
inline Dual<Interval> clamp(const Dual<Interval>& a, double lo, double hi) {
  Interval v = clamp(a.v, lo, hi);
  if (a.v.lo >= lo && a.v.hi <= hi) return {v, a.d};
  if (a.v.hi < lo || a.v.lo > hi) return {v, Interval{0.0}};
  return {v, hull(a.d, Interval{0.0})};
}

}  // namespace bvpair::ia
