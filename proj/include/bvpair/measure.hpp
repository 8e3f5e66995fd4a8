#pragma once

// Signed Radon measures on a bounded open interval: an absolutely continuous
// density, finitely many atoms, and densities against affine Cantor measures.

#include <functional>
#include <map>
#include <vector>

#include "bvpair/cantor.hpp"
#include "bvpair/quadrature.hpp"

namespace bvpair {

class TestFunction;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool include_lo = false;
  bool include_hi = false;

  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval point(double p) { return {p, p, true, true}; }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !include_lo) return false;
    if (x == hi && !include_hi) return false;
    return true;
  }
  bool empty() const { return lo > hi || (lo == hi && !(include_lo && include_hi)); }
};

// Finite disjoint union of intervals, sorted and maximally merged.
class BorelSet {
 public:
  BorelSet() = default;
  explicit BorelSet(std::vector<Interval> parts);
  static BorelSet of(const Interval& i) { return BorelSet({i}); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool contains(double x) const;

 private:
  std::vector<Interval> parts_;
};

// Lebesgue density term: f may be rough on the listed Cantor supports and
// non-smooth at the listed breaks.
struct Density {
  Fn f;
  std::vector<double> breaks;
  std::vector<Segment> rough;
  double sup = 0.0;  // certified bound on |f| (infinity when unknown)
};

// One Cantor part: (sum of coef_i h_i) times the unweighted Cantor measure on
// [lo, hi]. A missing h means the constant 1.
struct CantorPart {
  double lo = 0.0;
  double hi = 1.0;
  struct Term {
    double coef = 1.0;
    Fn h;  // empty: constant density 1
  };
  std::vector<Term> terms;

  CantorComponent component() const { return {1.0, lo, hi}; }
  bool constant_density() const;
  double density(double x) const;
  double total_weight() const;  // valid when constant_density()
};

class Measure {
 public:
  Measure() = default;
  Measure(double lo, double hi) : lo_(lo), hi_(hi) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }

  void add_density(double coef, Density d);
  void add_atom(double x, double w);
  void add_cantor(double lo, double hi, double coef, Fn h = {});

  const std::vector<std::pair<double, Density>>& densities() const { return ac_; }
  const std::map<double, double>& atoms() const { return atoms_; }
  const std::vector<CantorPart>& cantor() const { return cantor_; }

  double ac_density(double x) const;
  std::vector<double> ac_breaks() const;
  std::vector<Segment> ac_rough() const;
  double atom(double x) const;

  void drop_zero_atoms(double eps = 0.0);

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<std::pair<double, Density>> ac_;
  std::map<double, double> atoms_;
  std::vector<CantorPart> cantor_;
};

struct JordanParts {
  Measure tv;
  Measure pos;
  Measure neg;
};

double measure_eval(const Measure& mu, const BorelSet& s, const QuadOptions& opt = {});
double measure_eval(const Measure& mu, const Interval& s, const QuadOptions& opt = {});
double measure_pair(const Measure& mu, const TestFunction& phi, const QuadOptions& opt = {});
// Pairing with a general continuous function supported on [a, b].
double measure_pair_fn(const Measure& mu, const Fn& phi, double a, double b, const std::vector<double>& breaks,
                       const QuadOptions& opt = {});
JordanParts measure_tv(const Measure& mu);
Measure measure_combine(const std::vector<std::pair<double, Measure>>& terms);
Measure measure_restrict(const Measure& mu, const BorelSet& s);
bool measure_dominates(const Measure& mu, const Measure& nu, const std::vector<BorelSet>& samples, double tol,
                       const QuadOptions& opt = {});

}  // namespace bvpair
