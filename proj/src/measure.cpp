#include "bvpair/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvpair/error.hpp"
#include "bvpair/testfn.hpp"

namespace bvpair {

BorelSet::BorelSet(std::vector<Interval> parts) {
  std::vector<Interval> in;
  for (const Interval& p : parts) {
    if (p.lo > p.hi) throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
    if (!p.empty()) in.push_back(p);
  }
  std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.include_lo && !b.include_lo;
  });
  for (const Interval& p : in) {
    if (!parts_.empty()) {
      Interval& last = parts_.back();
      const bool touches = p.lo < last.hi || (p.lo == last.hi && (p.include_lo || last.include_hi));
      if (touches) {
        if (p.hi > last.hi) {
          last.hi = p.hi;
          last.include_hi = p.include_hi;
        } else if (p.hi == last.hi) {
          last.include_hi = last.include_hi || p.include_hi;
        }
        continue;
      }
    }
    parts_.push_back(p);
  }
}

bool BorelSet::contains(double x) const {
  return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& i) { return i.contains(x); });
}

bool CantorPart::constant_density() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return !t.h; });
}

double CantorPart::density(double x) const {
  double s = 0.0;
  for (const Term& t : terms) s += t.coef * (t.h ? t.h(x) : 1.0);
  return s;
}

double CantorPart::total_weight() const {
  double s = 0.0;
  for (const Term& t : terms) s += t.coef;
  return s;
}

void Measure::add_density(double coef, Density d) {
  if (coef != 0.0) ac_.emplace_back(coef, std::move(d));
}

void Measure::add_atom(double x, double w) {
  if (w == 0.0) return;
  atoms_[x] += w;
}

void Measure::add_cantor(double lo, double hi, double coef, Fn h) {
  if (coef == 0.0) return;
  for (CantorPart& p : cantor_) {
    if (p.lo == lo && p.hi == hi) {
      p.terms.push_back({coef, std::move(h)});
      return;
    }
    if (lo < p.hi && p.lo < hi)
      throw Error(ErrorCode::InvalidCantorOverlap, "Cantor supports must be identical or disjoint");
  }
  CantorPart p;
  p.lo = lo;
  p.hi = hi;
  p.terms.push_back({coef, std::move(h)});
  cantor_.push_back(std::move(p));
  std::sort(cantor_.begin(), cantor_.end(), [](const CantorPart& a, const CantorPart& b) { return a.lo < b.lo; });
}

double Measure::ac_density(double x) const {
  double s = 0.0;
  for (const auto& [c, d] : ac_) s += c * d.f(x);
  return s;
}

std::vector<double> Measure::ac_breaks() const {
  std::vector<double> b;
  for (const auto& [c, d] : ac_) b.insert(b.end(), d.breaks.begin(), d.breaks.end());
  for (const auto& [x, w] : atoms_) b.push_back(x);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<Segment> Measure::ac_rough() const {
  std::vector<Segment> r;
  for (const auto& [c, d] : ac_) r.insert(r.end(), d.rough.begin(), d.rough.end());
  std::sort(r.begin(), r.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  r.erase(std::unique(r.begin(), r.end(), [](const Segment& a, const Segment& b) { return a.lo == b.lo && a.hi == b.hi; }),
          r.end());
  return r;
}

double Measure::atom(double x) const {
  auto it = atoms_.find(x);
  return it == atoms_.end() ? 0.0 : it->second;
}

void Measure::drop_zero_atoms(double eps) {
  for (auto it = atoms_.begin(); it != atoms_.end();) {
    if (std::abs(it->second) <= eps)
      it = atoms_.erase(it);
    else
      ++it;
  }
}

namespace {

double ac_integral(const Measure& mu, const Fn& weight, double a, double b, const std::vector<double>& extra_breaks,
                   const QuadOptions& opt) {
  if (mu.densities().empty() || !(b > a)) return 0.0;
  std::vector<double> breaks = mu.ac_breaks();
  breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
  const Fn f = [&](double x) { return weight(x) * mu.ac_density(x); };
  return integrate(f, a, b, breaks, mu.ac_rough(), opt);
}

double cantor_integral(const CantorPart& p, const Fn& weight, double a, double b, const QuadOptions& opt) {
  const double lo = std::max(a, p.lo);
  const double hi = std::min(b, p.hi);
  if (!(hi > lo)) return 0.0;
  const CantorComponent k = p.component();
  if (!weight && p.constant_density()) return p.total_weight() * k.mass(lo, hi);
  const Fn f = [&](double x) { return (weight ? weight(x) : 1.0) * p.density(x); };
  return integrate_cantor(f, k, lo, hi, opt);
}

}  // namespace

double measure_eval(const Measure& mu, const Interval& s, const QuadOptions& opt) {
  return measure_eval(mu, BorelSet::of(s), opt);
}

double measure_eval(const Measure& mu, const BorelSet& s, const QuadOptions& opt) {
  double total = 0.0;
  const Fn one = [](double) { return 1.0; };
  for (const Interval& part : s.parts()) {
    double piece = 0.0;
    if (part.hi > part.lo) piece += ac_integral(mu, one, part.lo, part.hi, {}, opt);
    auto it = mu.atoms().lower_bound(part.lo);
    for (; it != mu.atoms().end() && it->first <= part.hi; ++it)
      if (part.contains(it->first)) piece += it->second;
    for (const CantorPart& p : mu.cantor()) piece += cantor_integral(p, {}, part.lo, part.hi, opt);
    total += piece;
  }
  return total;
}

double measure_pair_fn(const Measure& mu, const Fn& phi, double a, double b, const std::vector<double>& breaks,
                       const QuadOptions& opt) {
  double total = ac_integral(mu, phi, a, b, breaks, opt);
  auto it = mu.atoms().upper_bound(a);
  for (; it != mu.atoms().end() && it->first < b; ++it) total += phi(it->first) * it->second;
  for (const CantorPart& p : mu.cantor()) total += cantor_integral(p, phi, a, b, opt);
  return total;
}

double measure_pair(const Measure& mu, const TestFunction& phi, const QuadOptions& opt) {
  const Fn f = [&phi](double x) { return phi(x); };
  return measure_pair_fn(mu, f, phi.support_lo(), phi.support_hi(), phi.breaks(), opt);
}

JordanParts measure_tv(const Measure& mu) {
  JordanParts out{Measure(mu.lo(), mu.hi()), Measure(mu.lo(), mu.hi()), Measure(mu.lo(), mu.hi())};
  if (!mu.densities().empty()) {
    // Shared snapshot so the three densities stay valid independently of mu.
    auto src = std::make_shared<Measure>(mu);
    const std::vector<double> breaks = mu.ac_breaks();
    const std::vector<Segment> rough = mu.ac_rough();
    double sup = 0.0;
    for (const auto& [c, d] : mu.densities()) sup += std::abs(c) * d.sup;
    out.tv.add_density(1.0, Density{[src](double x) { return std::abs(src->ac_density(x)); }, breaks, rough, sup});
    out.pos.add_density(1.0, Density{[src](double x) { return std::max(0.0, src->ac_density(x)); }, breaks, rough, sup});
    out.neg.add_density(1.0, Density{[src](double x) { return std::max(0.0, -src->ac_density(x)); }, breaks, rough, sup});
  }
  for (const auto& [x, w] : mu.atoms()) {
    out.tv.add_atom(x, std::abs(w));
    if (w > 0) out.pos.add_atom(x, w);
    if (w < 0) out.neg.add_atom(x, -w);
  }
  for (const CantorPart& p : mu.cantor()) {
    if (p.constant_density()) {
      const double w = p.total_weight();
      out.tv.add_cantor(p.lo, p.hi, std::abs(w));
      if (w > 0) out.pos.add_cantor(p.lo, p.hi, w);
      if (w < 0) out.neg.add_cantor(p.lo, p.hi, -w);
      continue;
    }
    auto part = std::make_shared<CantorPart>(p);
    out.tv.add_cantor(p.lo, p.hi, 1.0, [part](double x) { return std::abs(part->density(x)); });
    out.pos.add_cantor(p.lo, p.hi, 1.0, [part](double x) { return std::max(0.0, part->density(x)); });
    out.neg.add_cantor(p.lo, p.hi, 1.0, [part](double x) { return std::max(0.0, -part->density(x)); });
  }
  return out;
}

Measure measure_combine(const std::vector<std::pair<double, Measure>>& terms) {
  if (terms.empty()) return Measure();
  Measure out(terms.front().second.lo(), terms.front().second.hi());
  for (const auto& [coef, mu] : terms) {
    if (coef == 0.0) continue;
    for (const auto& [c, d] : mu.densities()) out.add_density(coef * c, d);
    for (const auto& [x, w] : mu.atoms()) out.add_atom(x, coef * w);
    for (const CantorPart& p : mu.cantor())
      for (const CantorPart::Term& t : p.terms) out.add_cantor(p.lo, p.hi, coef * t.coef, t.h);
  }
  out.drop_zero_atoms();
  return out;
}

Measure measure_restrict(const Measure& mu, const BorelSet& s) {
  Measure out(mu.lo(), mu.hi());
  auto set = std::make_shared<BorelSet>(s);
  std::vector<double> cuts;
  for (const Interval& i : s.parts()) {
    cuts.push_back(i.lo);
    cuts.push_back(i.hi);
  }
  for (const auto& [c, d] : mu.densities()) {
    Density r = d;
    Fn f = d.f;
    r.f = [f, set](double x) { return set->contains(x) ? f(x) : 0.0; };
    r.breaks.insert(r.breaks.end(), cuts.begin(), cuts.end());
    out.add_density(c, std::move(r));
  }
  for (const auto& [x, w] : mu.atoms())
    if (s.contains(x)) out.add_atom(x, w);
  for (const CantorPart& p : mu.cantor())
    for (const CantorPart::Term& t : p.terms) {
      Fn h = t.h;
      out.add_cantor(p.lo, p.hi, t.coef, [h, set](double x) { return set->contains(x) ? (h ? h(x) : 1.0) : 0.0; });
    }
  return out;
}

bool measure_dominates(const Measure& mu, const Measure& nu, const std::vector<BorelSet>& samples, double tol,
                       const QuadOptions& opt) {
  for (const BorelSet& s : samples)
    if (measure_eval(nu, s, opt) > measure_eval(mu, s, opt) + tol) return false;
  return true;
}

}  // namespace bvpair
