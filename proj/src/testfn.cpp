#include "bvpair/testfn.hpp"

#include <cmath>

#include "bvpair/error.hpp"

namespace bvpair {

TestFunction TestFunction::bump(double center, double radius, double amplitude) {
  if (!(radius > 0.0)) throw Error(ErrorCode::ValidationError, "bump radius must be positive");
  TestFunction f;
  f.lo_ = center - radius;
  f.hi_ = center + radius;
  f.breaks_ = {f.lo_, center, f.hi_};
  f.sup_ = std::abs(amplitude);
  // max of |d/ds (1-s^2)^3| = 6 s (1-s^2)^2 is attained at s = 1/sqrt(5).
  const double s = 1.0 / std::sqrt(5.0);
  f.deriv_sup_ = std::abs(amplitude) * 6.0 * s * std::pow(1.0 - s * s, 2) / radius;
  f.bump_ = BumpParams{center, radius, amplitude};
  return f;
}

TestFunction TestFunction::from_pieces(std::vector<double> breaks, std::vector<Expr> pieces) {
  TestFunction f;
  Piecewise pw(breaks, pieces);
  const double tol = 1e-10;
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    const double x = breaks[i];
    if (std::abs(pw.eval(x, Side::Left) - pw.eval(x, Side::Right)) > tol ||
        std::abs(pw.deriv(x, Side::Left) - pw.deriv(x, Side::Right)) > tol)
      throw Error(ErrorCode::ValidationError, "test function is not C^1 at x = " + std::to_string(x));
  }
  const double a = breaks.front();
  const double b = breaks.back();
  if (std::abs(pw.eval(a, Side::Right)) > tol || std::abs(pw.deriv(a, Side::Right)) > tol ||
      std::abs(pw.eval(b, Side::Left)) > tol || std::abs(pw.deriv(b, Side::Left)) > tol)
    throw Error(ErrorCode::ValidationError, "test function must vanish with its derivative at the support ends");
  f.lo_ = a;
  f.hi_ = b;
  f.breaks_ = breaks;
  f.sup_ = pw.sup();
  double ds = 0.0;
  for (std::size_t i = 0; i < pw.pieces().size(); ++i) ds = std::max(ds, pw.piece_deriv_sup(i));
  f.deriv_sup_ = ds;
  f.pieces_ = std::move(pw);
  return f;
}

double TestFunction::operator()(double x) const {
  if (x <= lo_ || x >= hi_) return 0.0;
  if (bump_) {
    const double s = (x - bump_->center) / bump_->radius;
    const double q = 1.0 - s * s;
    return bump_->amplitude * q * q * q;
  }
  return pieces_->eval(x);
}

double TestFunction::deriv(double x) const {
  if (x <= lo_ || x >= hi_) return 0.0;
  if (bump_) {
    const double s = (x - bump_->center) / bump_->radius;
    const double q = 1.0 - s * s;
    return bump_->amplitude * 3.0 * q * q * (-2.0 * s) / bump_->radius;
  }
  return pieces_->deriv(x);
}

}  // namespace bvpair
