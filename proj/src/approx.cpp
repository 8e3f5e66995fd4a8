#include "bvpair/approx.hpp"

#include <algorithm>
#include <cmath>

#include "bvpair/error.hpp"

namespace bvpair {

namespace {

double min_separation(const BVFunction& u) {
  double sep = INFINITY;
  const auto& j = u.jumps();
  for (std::size_t i = 1; i < j.size(); ++i) sep = std::min(sep, j[i].x - j[i - 1].x);
  return sep;
}

Expr linear(double x0, double y0, double x1, double y1) {
  const double slope = (y1 - y0) / (x1 - x0);
  return ex::add(ex::constant(y0), ex::mul(ex::constant(slope), ex::sub(ex::var(), ex::constant(x0))));
}

}  // namespace

ClApprox gen_cl_sequence(const BVFunction& u, const Selection& sel, int n, const std::vector<double>& sigma_atoms) {
  if (u.has_cantor())
    throw Error(ErrorCode::InvalidArgument, "CL sequences require u without a Cantor part");
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const auto& jumps = u.jumps();
  if (min_separation(u) <= 6.0 / n)
    throw Error(ErrorCode::JumpsTooClose, "jumps closer than 6/n for n = " + std::to_string(n));
  const double lo = u.lo(), hi = u.hi();
  struct Window {
    double x, h, left, mid, right;
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    double gap = std::min(j.x - lo, hi - j.x);
    if (i > 0) gap = std::min(gap, j.x - jumps[i - 1].x);
    if (i + 1 < jumps.size()) gap = std::min(gap, jumps[i + 1].x - j.x);
    const double h = std::min(1.0 / n, gap / 3.0);
    const double l = sel.lambda.at(i);
    windows.push_back({j.x, h, u.eval(j.x - h, Side::Right), (1.0 - l) * j.u_minus + l * j.u_plus,
                       u.eval(j.x + h, Side::Left)});
  }
  std::vector<double> pts{lo, hi};
  if (u.spec().ac)
    for (double b : u.spec().ac->breaks()) pts.push_back(b);
  ClApprox out;
  for (const Window& w : windows) {
    pts.push_back(w.x - w.h);
    pts.push_back(w.x);
    pts.push_back(w.x + w.h);
    out.breaks.push_back(w.x - w.h);
    out.breaks.push_back(w.x);
    out.breaks.push_back(w.x + w.h);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Expr> pieces;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    Expr e;
    for (const Window& w : windows) {
      if (mid > w.x - w.h && mid < w.x) e = linear(w.x - w.h, w.left, w.x, w.mid);
      if (mid > w.x && mid < w.x + w.h) e = linear(w.x, w.mid, w.x + w.h, w.right);
    }
    if (!e) {
      if (u.spec().ac) {
        const Piecewise& p = *u.spec().ac;
        const Expr piece = p.pieces()[p.locate(mid, Side::Right)];
        e = ex::add(piece, ex::constant(u.eval(mid, Side::Right) - p.eval(mid)));
      } else {
        e = ex::constant(u.eval(mid, Side::Right));
      }
    }
    pieces.push_back(e);
  }
  BVSpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.ac = Piecewise(pts, pieces);
  spec.monotone_breaks = u.spec().monotone_breaks;
  out.un = BVFunction(spec);

  ClCertificate& c = out.cert;
  c.n = n;
  c.g = u.sup_bound();
  c.sup_un = out.un.sup_bound();
  for (const Window& w : windows) {
    c.h_max = std::max(c.h_max, w.h);
    const Fn diff = [&](double x) { return std::abs(out.un.value(x) - u.value(x)); };
    c.l1_distance += integrate(diff, w.x - w.h, w.x + w.h, {w.x}, {}, QuadOptions{});
  }
  c.pr_margin = INFINITY;
  for (double x : sigma_atoms) {
    const Representatives r = u.representatives(x, 0.0);
    const double v = out.un.value(x);
    c.pr_margin = std::min(c.pr_margin, std::min(v - r.u_minus, r.u_plus - v));
  }
  if (sigma_atoms.empty()) c.pr_margin = 0.0;
  c.strict_gap = std::abs(out.un.total_variation() - u.total_variation());
  return out;
}

int cl_min_n(const BVFunction& u, int kmin) {
  const double sep = min_separation(u);
  int n = 1 << kmin;
  while (sep <= 6.0 / n) {
    if (n > (1 << 28)) throw Error(ErrorCode::JumpsTooClose, "jumps too close for any CL ramp width");
    n *= 2;
  }
  return n;
}

std::vector<int> cl_ladder(const BVFunction& u, int kmin, int kmax) {
  std::vector<int> out;
  const int start = cl_min_n(u, kmin);
  for (int n = start; n <= (1 << kmax); n *= 2) out.push_back(n);
  return out;
}

namespace {

std::vector<double> integrand_breaks(const Field& f, const ClApprox& a) {
  std::vector<double> br = a.un.breaks();
  const auto fb = f.breaks();
  br.insert(br.end(), fb.begin(), fb.end());
  return br;
}

}  // namespace

double cl_pair(const Field& f, const ClApprox& a, const TestFunction& phi, const QuadOptions& opt) {
  std::vector<double> br = integrand_breaks(f, a);
  br.insert(br.end(), phi.breaks().begin(), phi.breaks().end());
  const Fn g = [&](double x) {
    const double du = a.un.ac_density(x);
    return du == 0.0 ? 0.0 : phi(x) * f.b(x, Side::Right, a.un.value(x)) * du;
  };
  return integrate(g, phi.support_lo(), phi.support_hi(), br, f.rough(), opt);
}

double cl_abs(const Field& f, const ClApprox& a, double lo, double hi, const QuadOptions& opt) {
  const Fn g = [&](double x) {
    const double du = a.un.ac_density(x);
    return du == 0.0 ? 0.0 : std::abs(f.b(x, Side::Right, a.un.value(x)) * du);
  };
  return integrate(g, lo, hi, integrand_breaks(f, a), f.rough(), opt);
}

}  // namespace bvpair
