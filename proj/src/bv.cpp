#include "bvpair/bv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvpair/error.hpp"

namespace bvpair {

namespace {

bool close_to(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

std::vector<CantorComponent> merge_cantor(std::vector<CantorComponent> comps, double lo, double hi) {
  std::vector<CantorComponent> out;
  for (const CantorComponent& c : comps) {
    if (!(c.lo < c.hi)) throw Error(ErrorCode::ValidationError, "Cantor support must satisfy lo < hi");
    if (c.lo < lo || c.hi > hi) throw Error(ErrorCode::ValidationError, "Cantor support must lie in the domain");
    bool merged = false;
    for (CantorComponent& o : out) {
      if (o.lo == c.lo && o.hi == c.hi) {
        o.weight += c.weight;
        merged = true;
        break;
      }
      if (c.lo < o.hi && o.lo < c.hi)
        throw Error(ErrorCode::InvalidCantorOverlap, "Cantor supports must be identical or disjoint");
    }
    if (!merged) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CantorComponent& a, const CantorComponent& b) { return a.lo < b.lo; });
  out.erase(std::remove_if(out.begin(), out.end(), [](const CantorComponent& c) { return c.weight == 0.0; }),
            out.end());
  return out;
}

}  // namespace

double cantor_sum(const std::vector<CantorComponent>& comps, double x) {
  double s = 0.0;
  for (const CantorComponent& c : comps)
    if (x > c.lo) s += c.weight * c.cdf(x);
  return s;
}

// ------------------------------------------------------ FinitePerimeterSet

FinitePerimeterSet::FinitePerimeterSet(std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  for (const auto& [a, b] : intervals) {
    if (!(a < b)) throw Error(ErrorCode::ValidationError, "finite perimeter set needs nondegenerate intervals");
    if (!intervals_.empty() && a <= intervals_.back().second) {
      intervals_.back().second = std::max(intervals_.back().second, b);
      continue;
    }
    intervals_.emplace_back(a, b);
  }
}

std::vector<FinitePerimeterSet::BoundaryPoint> FinitePerimeterSet::reduced_boundary(double lo, double hi) const {
  std::vector<BoundaryPoint> out;
  for (const auto& [a, b] : intervals_) {
    if (a > lo && a < hi) out.push_back({a, +1});
    if (b > lo && b < hi) out.push_back({b, -1});
  }
  return out;
}

BorelSet FinitePerimeterSet::interior() const {
  std::vector<Interval> parts;
  for (const auto& [a, b] : intervals_) parts.push_back(Interval::open(a, b));
  return BorelSet(parts);
}

BorelSet FinitePerimeterSet::closure() const {
  std::vector<Interval> parts;
  for (const auto& [a, b] : intervals_) parts.push_back(Interval::closed(a, b));
  return BorelSet(parts);
}

bool FinitePerimeterSet::compact_in(double lo, double hi) const {
  return std::all_of(intervals_.begin(), intervals_.end(), [&](const auto& p) { return p.first > lo && p.second < hi; });
}

// ------------------------------------------------------------- BVFunction

BVFunction::BVFunction(BVSpec spec) : spec_(std::move(spec)) {
  const double lo = spec_.lo;
  const double hi = spec_.hi;
  if (!(lo < hi)) throw Error(ErrorCode::ValidationError, "domain must satisfy lo < hi");
  if (spec_.ac) {
    const Piecewise& p = *spec_.ac;
    if (!close_to(p.lo(), lo) || !close_to(p.hi(), hi))
      throw Error(ErrorCode::ValidationError, "ac pieces must cover the whole domain");
    if (p.continuity_defect() > 1e-10)
      throw Error(ErrorCode::ValidationError,
                  "the continuous part must be continuous at its breaks; put discontinuities in the jump list");
  }
  std::sort(spec_.jumps.begin(), spec_.jumps.end(), [](const JumpSpec& a, const JumpSpec& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < spec_.jumps.size(); ++i) {
    const JumpSpec& j = spec_.jumps[i];
    if (!(j.x > lo && j.x < hi)) throw Error(ErrorCode::ValidationError, "jump points must lie inside the domain");
    if (j.size == 0.0) throw Error(ErrorCode::ValidationError, "jump sizes must be nonzero");
    if (i > 0 && spec_.jumps[i - 1].x == j.x) throw Error(ErrorCode::ValidationError, "duplicate jump point");
  }
  spec_.cantor = merge_cantor(spec_.cantor, lo, hi);
  jump_cum_.resize(spec_.jumps.size() + 1, 0.0);
  for (std::size_t i = 0; i < spec_.jumps.size(); ++i) jump_cum_[i + 1] = jump_cum_[i] + spec_.jumps[i].size;

  offset_ = 0.0;
  if (spec_.base_value) {
    const double bp = spec_.base_point.value_or(lo);
    if (bp < lo || bp > hi) throw Error(ErrorCode::ValidationError, "base point outside the domain");
    for (const JumpSpec& j : spec_.jumps)
      if (j.x == bp) throw Error(ErrorCode::ValidationError, "base point must not be a jump point");
    const Side side = bp >= hi ? Side::Left : Side::Right;
    offset_ = *spec_.base_value - eval(bp, side);
  }

  for (const JumpSpec& j : spec_.jumps) {
    JumpPoint jp;
    jp.x = j.x;
    jp.left = eval(j.x, Side::Left);
    jp.right = eval(j.x, Side::Right);
    jp.nu = jp.right > jp.left ? 1 : -1;
    jp.u_minus = std::min(jp.left, jp.right);
    jp.u_plus = std::max(jp.left, jp.right);
    jp.u_i = jp.u_plus;
    jp.u_e = jp.u_minus;
    jumps_.push_back(jp);
  }

  // Monotone pieces between all structural points.
  std::vector<double> pts{lo, hi};
  if (spec_.ac)
    for (double b : spec_.ac->breaks())
      if (b > lo && b < hi) pts.push_back(b);
  for (const JumpSpec& j : spec_.jumps) pts.push_back(j.x);
  for (const CantorComponent& c : spec_.cantor) {
    if (c.lo > lo) pts.push_back(c.lo);
    if (c.hi < hi) pts.push_back(c.hi);
  }
  for (double b : spec_.monotone_breaks)
    if (b > lo && b < hi) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  certified_ = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    MonotonePiece mp;
    mp.a = pts[i];
    mp.b = pts[i + 1];
    mp.ac_sign = spec_.ac ? spec_.ac->derivative_sign(mp.a, mp.b) : 0;
    int dir = mp.ac_sign == 2 ? 2 : mp.ac_sign;
    for (const CantorComponent& c : spec_.cantor) {
      if (c.lo <= mp.a && mp.b <= c.hi) {
        const int s = c.weight > 0 ? 1 : -1;
        if (dir == 0)
          dir = s;
        else if (dir != s)
          dir = 2;
      }
    }
    if (dir == 2) certified_ = false;
    mp.dir = dir;
    pieces_.push_back(mp);
  }

  // Sup bound: exact from piece endpoints when certified.
  double sb = 0.0;
  if (certified_) {
    for (const MonotonePiece& mp : pieces_) {
      sb = std::max(sb, std::abs(eval(mp.a, Side::Right)));
      sb = std::max(sb, std::abs(eval(mp.b, Side::Left)));
    }
  } else {
    sb = std::abs(offset_) + (spec_.ac ? spec_.ac->sup() : 0.0);
    for (const JumpSpec& j : spec_.jumps) sb += std::abs(j.size);
    for (const CantorComponent& c : spec_.cantor) sb += std::abs(c.weight);
  }
  sup_bound_ = sb;
}

double BVFunction::continuous(double x, Side side) const {
  double v = offset_ + cantor_sum(spec_.cantor, x);
  if (spec_.ac) v += spec_.ac->eval(x, side);
  return v;
}

double BVFunction::jump_sum(double x, Side side) const {
  const auto& js = spec_.jumps;
  auto cmp = [](const JumpSpec& j, double v) { return j.x < v; };
  std::size_t n;
  if (side == Side::Right) {
    n = static_cast<std::size_t>(
        std::upper_bound(js.begin(), js.end(), x, [](double v, const JumpSpec& j) { return v < j.x; }) - js.begin());
  } else {
    n = static_cast<std::size_t>(std::lower_bound(js.begin(), js.end(), x, cmp) - js.begin());
  }
  return jump_cum_[n];
}

double BVFunction::eval(double x, Side side) const { return continuous(x, side) + jump_sum(x, side); }

std::pair<double, double> BVFunction::eval_sided(double x) const {
  return {eval(x, Side::Left), eval(x, Side::Right)};
}

ia::Dual<double> BVFunction::eval_dual(double x) const {
  ia::Dual<double> d{offset_ + cantor_sum(spec_.cantor, x) + jump_sum(x, Side::Right), 0.0};
  if (spec_.ac) {
    const auto p = spec_.ac->eval_dual(x);
    d.v += p.v;
    d.d = p.d;
  }
  return d;
}

double BVFunction::ac_density(double x) const { return spec_.ac ? spec_.ac->deriv(x) : 0.0; }

bool BVFunction::has_ac() const {
  if (!spec_.ac) return false;
  for (std::size_t i = 0; i < spec_.ac->pieces().size(); ++i)
    if (!spec_.ac->piece_is_constant(i)) return true;
  return false;
}

const JumpPoint* BVFunction::jump_at(double x) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x, [](const JumpPoint& j, double v) { return j.x < v; });
  if (it != jumps_.end() && it->x == x) return &*it;
  return nullptr;
}

Representatives BVFunction::representatives(double x, double lambda) const {
  Representatives r;
  if (const JumpPoint* j = jump_at(x)) {
    r.u_minus = j->u_minus;
    r.u_plus = j->u_plus;
    r.u_lambda = (1.0 - lambda) * j->u_minus + lambda * j->u_plus;
    r.u_i = j->u_i;
    r.u_e = j->u_e;
    r.nu = j->nu;
    return r;
  }
  const double v = value(x);
  r.u_minus = r.u_plus = r.u_lambda = r.u_i = r.u_e = v;
  r.u_tilde = v;
  r.nu = 1;
  return r;
}

std::vector<double> BVFunction::breaks() const {
  std::vector<double> b;
  if (spec_.ac) b = spec_.ac->breaks();
  for (const JumpPoint& j : jumps_) b.push_back(j.x);
  for (const CantorComponent& c : spec_.cantor) {
    b.push_back(c.lo);
    b.push_back(c.hi);
  }
  b.push_back(lo());
  b.push_back(hi());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<Segment> BVFunction::rough() const {
  std::vector<Segment> r;
  for (const CantorComponent& c : spec_.cantor) r.push_back({c.lo, c.hi});
  return r;
}

Measure BVFunction::derivative() const {
  Measure m(lo(), hi());
  if (has_ac()) {
    const Piecewise p = *spec_.ac;
    double sup = 0.0;
    for (std::size_t i = 0; i < p.pieces().size(); ++i) sup = std::max(sup, p.piece_deriv_sup(i));
    m.add_density(1.0, Density{[p](double x) { return p.deriv(x); }, p.breaks(), {}, sup});
  }
  for (const JumpPoint& j : jumps_) m.add_atom(j.x, j.size());
  for (const CantorComponent& c : spec_.cantor) m.add_cantor(c.lo, c.hi, c.weight);
  return m;
}

double BVFunction::ac_tv(double a, double b) const {
  if (!spec_.ac || !(b > a)) return 0.0;
  double s = 0.0;
  for (const MonotonePiece& mp : pieces_) {
    const double l = std::max(a, mp.a);
    const double r = std::min(b, mp.b);
    if (!(r > l)) continue;
    if (mp.ac_sign == 2) {
      const Piecewise& p = *spec_.ac;
      s += integrate([&p](double x) { return std::abs(p.deriv(x)); }, l, r, p.breaks(), {}, QuadOptions{});
    } else {
      s += std::abs(spec_.ac->eval(r, Side::Left) - spec_.ac->eval(l, Side::Right));
    }
  }
  return s;
}

double BVFunction::total_variation(const Interval& i) const {
  const double a = std::max(i.lo, lo());
  const double b = std::min(i.hi, hi());
  double s = ac_tv(a, b);
  for (const JumpPoint& j : jumps_)
    if (i.contains(j.x)) s += std::abs(j.size());
  for (const CantorComponent& c : spec_.cantor) s += std::abs(c.weight) * c.mass(std::max(a, c.lo), std::min(b, c.hi));
  return s;
}

double BVFunction::du(const Interval& i) const {
  const double a = std::max(i.lo, lo());
  const double b = std::min(i.hi, hi());
  double s = 0.0;
  if (spec_.ac && b > a) s += spec_.ac->eval(b, Side::Left) - spec_.ac->eval(a, Side::Right);
  for (const JumpPoint& j : jumps_)
    if (i.contains(j.x)) s += j.size();
  for (const CantorComponent& c : spec_.cantor) s += c.weight * c.mass(std::max(a, c.lo), std::min(b, c.hi));
  return s;
}

// ------------------------------------------------------------- level sets

namespace {

constexpr double kBisectTol = 1e-12;

// Smallest x in (a, b) where pred switches from false to true, given pred
// false near a and true near b.
template <class Pred>
double bisect(double a, double b, Pred pred) {
  double l = a, r = b;
  while (r - l > kBisectTol * std::max(1.0, std::abs(l))) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    if (pred(m))
      r = m;
    else
      l = m;
  }
  return 0.5 * (l + r);
}

}  // namespace

std::vector<double> exceptional_values(const BVFunction& u) {
  std::vector<double> out;
  for (const JumpPoint& j : u.jumps()) {
    out.push_back(j.left);
    out.push_back(j.right);
  }
  const auto& ps = u.monotone_pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].dir == 0) out.push_back(u.eval(ps[i].a, Side::Right));
    if (i + 1 < ps.size() && !u.jump_at(ps[i].b)) {
      const int d0 = ps[i].dir, d1 = ps[i + 1].dir;
      if (d0 != d1 || d0 == 0) out.push_back(u.eval(ps[i].b, Side::Right));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LevelSet bv_level_set(const BVFunction& u, double t) {
  if (!u.certified()) throw Error(ErrorCode::NoCertificate, "level sets need a monotone-piece certificate");
  LevelSet out;
  std::vector<std::pair<double, double>> ivs;
  for (const MonotonePiece& mp : u.monotone_pieces()) {
    const double ua = u.eval(mp.a, Side::Right);
    const double ub = u.eval(mp.b, Side::Left);
    double l = mp.a, r = mp.b;
    bool any = true;
    if (mp.dir >= 0) {
      if (ua > t) {
      } else if (ub <= t) {
        any = false;
      } else {
        l = bisect(mp.a, mp.b, [&](double x) { return u.eval(x, Side::Right) > t; });
        const double l2 = bisect(mp.a, mp.b, [&](double x) { return u.eval(x, Side::Right) >= t; });
        if (l - l2 > 1e-9) out.regular = false;  // plateau at level t
      }
      if (mp.dir == 0 && close_to(t, ua)) out.regular = false;
    } else {
      if (ub > t) {
      } else if (ua <= t) {
        any = false;
      } else {
        r = bisect(mp.a, mp.b, [&](double x) { return u.eval(x, Side::Right) <= t; });
        const double r2 = bisect(mp.a, mp.b, [&](double x) { return u.eval(x, Side::Right) < t; });
        if (r2 - r > 1e-9) out.regular = false;
      }
    }
    if (any && r > l) {
      if (!ivs.empty() && ivs.back().second == l)
        ivs.back().second = r;
      else
        ivs.emplace_back(l, r);
    }
  }
  for (double v : exceptional_values(u))
    if (close_to(t, v)) out.regular = false;
  out.set = FinitePerimeterSet(ivs);
  return out;
}

BVFunction chi_of(const FinitePerimeterSet& e, double lo, double hi) {
  BVSpec s;
  s.lo = lo;
  s.hi = hi;
  for (const auto& bp : e.reduced_boundary(lo, hi)) s.jumps.push_back({bp.x, static_cast<double>(bp.nu)});
  const bool starts_in = !e.empty() && e.intervals().front().first <= lo;
  s.base_value = starts_in ? 1.0 : 0.0;
  return BVFunction(s);
}

BVFunction bv_chi(const BVFunction& u, double t) { return chi_of(bv_level_set(u, t).set, u.lo(), u.hi()); }

}  // namespace bvpair
