#include "bvpair/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "bvpair/error.hpp"

namespace bvpair {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  double kronrod;
  double gauss;
  double kronrod_abs;  // Kronrod sum of |f|, for the round-off floor
};

constexpr double kEps = 2.220446049250313e-16;

Rule gk15(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  double ka = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    const double s = f1 + f2;
    k += kWgk[j] * s;
    ka += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {k * h, g * h, ka * std::abs(h)};
}

class Integrator {
 public:
  Integrator(const Fn& f, const std::vector<double>& breaks, const std::vector<Segment>& rough,
             const QuadOptions& opt, double density)
      : f_(f), breaks_(breaks), rough_(rough), opt_(opt), tol_density_(density) {}

  // Smooth integral over [a, b], split at breaks.
  double smooth(double a, double b) {
    if (!(b > a)) return 0.0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), a);
    double sum = 0.0;
    double left = a;
    for (; it != breaks_.end() && *it < b; ++it) {
      sum += adaptive(left, *it, 0);
      left = *it;
    }
    sum += adaptive(left, b, 0);
    return sum;
  }

  // Middle-third recursion over the Cantor node [lo, hi] clipped to [ca, cb].
  double rough(double lo, double hi, int level, double ca, double cb) {
    if (hi <= ca || lo >= cb) return 0.0;
    if (level >= opt_.gap_depth) {
      const double x0 = std::max(lo, ca);
      const double x1 = std::min(hi, cb);
      evals_ += 1;
      return f_(0.5 * (x0 + x1)) * (x1 - x0);
    }
    const double third = (hi - lo) / 3.0;
    const double g0 = lo + third;
    const double g1 = hi - third;
    const double left = rough(lo, g0, level + 1, ca, cb);
    const double mid = smooth(std::max(g0, ca), std::min(g1, cb));
    const double right = rough(g1, hi, level + 1, ca, cb);
    return left + mid + right;
  }

  double run(double a, double b) {
    // Cells between rough segments are smooth, cells inside are rough.
    double sum = 0.0;
    double cursor = a;
    for (const Segment& s : rough_) {
      if (s.hi <= cursor || s.lo >= b) continue;
      sum += smooth(cursor, std::max(cursor, s.lo));
      sum += rough(s.lo, s.hi, 0, std::max(cursor, s.lo), std::min(b, s.hi));
      cursor = std::min(b, s.hi);
    }
    sum += smooth(cursor, b);
    return sum;
  }

 private:
  const Fn& f_;
  const std::vector<double>& breaks_;
  const std::vector<Segment>& rough_;
  const QuadOptions& opt_;
  double tol_density_;
  long evals_ = 0;

  double adaptive(double a, double b, int depth) {
    if (!(b > a)) return 0.0;
    const Rule r = gk15(f_, a, b);
    evals_ += 15;
    if (evals_ > opt_.max_evals)
      throw Error(ErrorCode::TolNotMet, "quadrature budget exhausted before reaching tolerance");
    const double err = std::abs(r.kronrod - r.gauss);
    const double local = std::max(tol_density_ * (b - a), 1e3 * kEps * r.kronrod_abs);
    if (err <= local || depth >= 60 || (b - a) < 1e-15 * std::max(1.0, std::abs(a))) return r.kronrod;
    const double m = 0.5 * (a + b);
    return adaptive(a, m, depth + 1) + adaptive(m, b, depth + 1);
  }
};

std::vector<Segment> normalized(const std::vector<Segment>& rough) {
  std::vector<Segment> out;
  for (const Segment& s : rough)
    if (s.hi > s.lo) out.push_back(s);
  std::sort(out.begin(), out.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace

double integrate(const Fn& f, double a, double b, const std::vector<double>& breaks,
                 const std::vector<Segment>& rough, const QuadOptions& opt) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, breaks, rough, opt);
  std::vector<double> sorted = breaks;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::vector<Segment> segs = normalized(rough);
  const double density = opt.abs_tol / (b - a);
  Integrator in(f, sorted, segs, opt, density);
  return in.run(a, b);
}

namespace {

struct CantorIntegrator {
  const Fn& f;
  const CantorComponent& k;
  double a, b;
  const QuadOptions& opt;

  double rec(double lo, double hi, double mass, int depth, double parent) {
    if (hi <= a || lo >= b) return 0.0;
    const bool full = lo >= a && hi <= b;
    const double third = (hi - lo) / 3.0;
    if (!full) {
      if (depth >= opt.cantor_depth) {
        const double x0 = std::max(lo, a);
        const double x1 = std::min(hi, b);
        return f(0.5 * (x0 + x1)) * k.mass(x0, x1);
      }
      const double lm = lo + third / 2.0;
      const double rm = hi - third / 2.0;
      return rec(lo, lo + third, 0.5 * mass, depth + 1, f(lm) * 0.5 * mass) +
             rec(hi - third, hi, 0.5 * mass, depth + 1, f(rm) * 0.5 * mass);
    }
    if (depth >= opt.cantor_depth) return parent;
    const double lm = lo + third / 2.0;
    const double rm = hi - third / 2.0;
    const double left = f(lm) * 0.5 * mass;
    const double right = f(rm) * 0.5 * mass;
    const double children = left + right;
    if (depth >= opt.cantor_min_depth && std::abs(children - parent) <= opt.abs_tol * mass) return children;
    return rec(lo, lo + third, 0.5 * mass, depth + 1, left) + rec(hi - third, hi, 0.5 * mass, depth + 1, right);
  }
};

}  // namespace

double integrate_cantor(const Fn& f, const CantorComponent& k, double a, double b, const QuadOptions& opt) {
  if (!(b > a)) return 0.0;
  CantorIntegrator ci{f, k, a, b, opt};
  const double mid = 0.5 * (k.lo + k.hi);
  return ci.rec(k.lo, k.hi, 1.0, 0, f(mid));
}

double kronrod15(const Fn& f, double a, double b) { return gk15(f, a, b).kronrod; }

}  // namespace bvpair
