#pragma once

// Bounded-variation functions on an interval, stored through their
// decomposition: a continuous closed-form part (whose derivative is the
// absolutely continuous part of Du), finitely many jumps and Cantor parts.

#include <optional>
#include <utility>
#include <vector>

#include "bvpair/cantor.hpp"
#include "bvpair/measure.hpp"
#include "bvpair/piecewise.hpp"

namespace bvpair {

struct JumpPoint {
  double x = 0.0;
  double left = 0.0;
  double right = 0.0;
  int nu = 1;  // sign(right - left)
  double u_minus = 0.0;
  double u_plus = 0.0;
  double u_i = 0.0;  // value on the side nu points to (= u_plus)
  double u_e = 0.0;  // value on the other side (= u_minus)

  double size() const { return right - left; }
};

struct JumpSpec {
  double x = 0.0;
  double size = 0.0;
};

struct BVSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::optional<Piecewise> ac;  // continuous part; its derivative is D^a u
  std::vector<JumpSpec> jumps;
  std::vector<CantorComponent> cantor;
  std::optional<double> base_point;  // default lo (value at lo+)
  std::optional<double> base_value;  // default: no shift
  std::vector<double> monotone_breaks;
};

struct MonotonePiece {
  double a = 0.0;
  double b = 0.0;
  int dir = 0;     // +1 nondecreasing, -1 nonincreasing, 0 constant
  int ac_sign = 0;  // sign of the continuous part's derivative on (a, b)
};

struct Representatives {
  double u_minus = 0.0;
  double u_plus = 0.0;
  std::optional<double> u_tilde;  // absent at jump points
  double u_lambda = 0.0;
  double u_i = 0.0;
  double u_e = 0.0;
  int nu = 1;
};

class FinitePerimeterSet {
 public:
  FinitePerimeterSet() = default;
  // Closed intervals [a, b]; overlapping or touching intervals are merged.
  explicit FinitePerimeterSet(std::vector<std::pair<double, double>> intervals);

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  struct BoundaryPoint {
    double x;
    int nu;  // inward normal: +1 at a left endpoint, -1 at a right endpoint
  };
  // Reduced boundary relative to the open domain (lo, hi).
  std::vector<BoundaryPoint> reduced_boundary(double lo, double hi) const;
  BorelSet interior() const;  // union of open interiors
  BorelSet closure() const;   // interior plus reduced boundary
  bool compact_in(double lo, double hi) const;

 private:
  std::vector<std::pair<double, double>> intervals_;
};

struct LevelSet {
  FinitePerimeterSet set;
  bool regular = true;
};

class BVFunction {
 public:
  BVFunction() = default;
  explicit BVFunction(BVSpec spec);

  const BVSpec& spec() const { return spec_; }
  double lo() const { return spec_.lo; }
  double hi() const { return spec_.hi; }

  double eval(double x, Side side) const;
  std::pair<double, double> eval_sided(double x) const;
  // Precise representative; at a jump point the right limit is returned.
  double value(double x) const { return eval(x, Side::Right); }
  // Value and derivative of the continuous part at a non-jump point.
  ia::Dual<double> eval_dual(double x) const;
  double ac_density(double x) const;

  Representatives representatives(double x, double lambda) const;

  const std::vector<JumpPoint>& jumps() const { return jumps_; }
  const JumpPoint* jump_at(double x) const;
  const std::vector<CantorComponent>& cantor() const { return spec_.cantor; }
  bool has_cantor() const { return !spec_.cantor.empty(); }
  bool has_ac() const;

  bool certified() const { return certified_; }
  const std::vector<MonotonePiece>& monotone_pieces() const { return pieces_; }
  double sup_bound() const { return sup_bound_; }

  // Breakpoints of the decomposition: AC breaks, jumps, Cantor endpoints.
  std::vector<double> breaks() const;
  std::vector<Segment> rough() const;

  Measure derivative() const;
  // Exact |Du| and Du of an interval (endpoint flags respected).
  double total_variation(const Interval& i) const;
  double du(const Interval& i) const;
  double total_variation() const { return total_variation(Interval::open(lo(), hi())); }

 private:
  BVSpec spec_;
  double offset_ = 0.0;
  std::vector<JumpPoint> jumps_;
  std::vector<double> jump_cum_;  // prefix sums of jump sizes
  std::vector<MonotonePiece> pieces_;
  bool certified_ = false;
  double sup_bound_ = 0.0;

  double continuous(double x, Side side) const;
  double jump_sum(double x, Side side) const;
  double ac_tv(double a, double b) const;
};

double cantor_sum(const std::vector<CantorComponent>& comps, double x);

// {u > t} and the regularity flag (jump values, extremum values and plateau
// values are irregular). Throws NO_CERTIFICATE without a monotonicity
// certificate.
LevelSet bv_level_set(const BVFunction& u, double t);
BVFunction bv_chi(const BVFunction& u, double t);
BVFunction chi_of(const FinitePerimeterSet& e, double lo, double hi);

// Values t at which bv_level_set reports irregular (finite part only).
std::vector<double> exceptional_values(const BVFunction& u);

}  // namespace bvpair
