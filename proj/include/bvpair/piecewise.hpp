#pragma once

#include <vector>

#include "bvpair/expr.hpp"

namespace bvpair {

enum class Side { Left, Right };

// Closed-form expressions on consecutive subintervals. breaks has one more
// entry than pieces; piece i lives on (breaks[i], breaks[i+1]).
class Piecewise {
 public:
  Piecewise() = default;
  Piecewise(std::vector<double> breaks, std::vector<Expr> pieces);
  static Piecewise constant(double lo, double hi, double value);

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<Expr>& pieces() const { return pieces_; }
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  bool empty() const { return pieces_.empty(); }

  // Index of the piece used for the one-sided limit at x.
  std::size_t locate(double x, Side side) const;

  double eval(double x, Side side = Side::Right) const;
  double deriv(double x, Side side = Side::Right) const;
  ia::Dual<double> eval_dual(double x, Side side = Side::Right) const;

  // Certified sup |p| and sup |p'| on the closure of piece i.
  double piece_sup(std::size_t i) const;
  double piece_deriv_sup(std::size_t i) const;
  double sup() const;

  // True when every piece is a constant expression (no AC part).
  bool piece_is_constant(std::size_t i) const { return !depends_on_var(pieces_[i]); }

  // Largest mismatch of one-sided limits at interior breaks.
  double continuity_defect() const;

  // Certified sign of the derivative on [a, b] within one piece:
  // +1 nonnegative, -1 nonpositive, 0 identically zero, 2 undecided.
  // Values within `slack` of zero are treated as zero.
  int derivative_sign(double a, double b, double slack = 1e-12) const;

 private:
  std::vector<double> breaks_;
  std::vector<Expr> pieces_;
};

}  // namespace bvpair
