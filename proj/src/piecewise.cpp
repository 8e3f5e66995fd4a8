#include "bvpair/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "bvpair/error.hpp"

namespace bvpair {

Piecewise::Piecewise(std::vector<double> breaks, std::vector<Expr> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (breaks_.size() != pieces_.size() + 1 || pieces_.empty())
    throw Error(ErrorCode::ValidationError, "piecewise: need one more break than pieces");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw Error(ErrorCode::ValidationError, "piecewise: breaks must be strictly increasing");
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (!std::isfinite(piece_sup(i)))
      throw Error(ErrorCode::ValidationError, "piecewise: piece " + std::to_string(i) + " is unbounded");
}

Piecewise Piecewise::constant(double lo, double hi, double value) {
  return Piecewise({lo, hi}, {ex::constant(value)});
}

std::size_t Piecewise::locate(double x, Side side) const {
  const std::size_t m = pieces_.size();
  if (side == Side::Right) {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(idx, m - 1);
  }
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, m - 1);
}

double Piecewise::eval(double x, Side side) const { return bvpair::eval(pieces_[locate(x, side)], x); }

double Piecewise::deriv(double x, Side side) const { return bvpair::deriv(pieces_[locate(x, side)], x); }

ia::Dual<double> Piecewise::eval_dual(double x, Side side) const {
  return eval_as(*pieces_[locate(x, side)], ia::Dual<double>{x, 1.0});
}

double Piecewise::piece_sup(std::size_t i) const { return sup_abs(pieces_[i], breaks_[i], breaks_[i + 1]); }

double Piecewise::piece_deriv_sup(std::size_t i) const {
  return sup_abs_deriv(pieces_[i], breaks_[i], breaks_[i + 1]);
}

double Piecewise::sup() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) s = std::max(s, piece_sup(i));
  return s;
}

double Piecewise::continuity_defect() const {
  double d = 0.0;
  for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
    const double x = breaks_[i];
    d = std::max(d, std::abs(bvpair::eval(pieces_[i - 1], x) - bvpair::eval(pieces_[i], x)));
  }
  return d;
}

int Piecewise::derivative_sign(double a, double b, double slack) const {
  const std::size_t i = locate(0.5 * (a + b), Side::Right);
  const Expr& e = pieces_[i];
  if (!depends_on_var(e)) return 0;
  // Bisect until every cell has a definite sign or the budget runs out.
  bool any_pos = false, any_neg = false;
  std::vector<std::pair<double, double>> stack{{a, b}};
  int budget = 1 << 14;
  while (!stack.empty()) {
    auto [l, r] = stack.back();
    stack.pop_back();
    const ia::Interval d = deriv_range(e, ia::Interval{l, r});
    if (d.lo >= -slack && d.hi <= slack) continue;
    if (d.lo >= -slack) {
      any_pos = true;
      continue;
    }
    if (d.hi <= slack) {
      any_neg = true;
      continue;
    }
    if (--budget <= 0 || r - l < 1e-13 * std::max(1.0, std::abs(l))) return 2;
    const double m = 0.5 * (l + r);
    stack.push_back({m, r});
    stack.push_back({l, m});
  }
  if (any_pos && any_neg) return 2;
  if (any_pos) return 1;
  if (any_neg) return -1;
  return 0;
}

}  // namespace bvpair
