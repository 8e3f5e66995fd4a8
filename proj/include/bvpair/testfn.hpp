#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvpair/piecewise.hpp"

namespace bvpair {

// C^1 function with compact support [support_lo, support_hi], zero outside.
class TestFunction {
 public:
  // amplitude * (1 - ((x - center) / radius)^2)^3 on |x - center| < radius.
  static TestFunction bump(double center, double radius, double amplitude = 1.0);
  // Closed-form pieces on [breaks.front(), breaks.back()]; validated to be
  // C^1 across breaks and to vanish to first order at both ends.
  static TestFunction from_pieces(std::vector<double> breaks, std::vector<Expr> pieces);

  double operator()(double x) const;
  double deriv(double x) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<double>& breaks() const { return breaks_; }
  double sup() const { return sup_; }
  double deriv_sup() const { return deriv_sup_; }

  // Parameters when built as a bump (used for serialization).
  struct BumpParams {
    double center, radius, amplitude;
  };
  const std::optional<BumpParams>& bump_params() const { return bump_; }
  const std::optional<Piecewise>& pieces() const { return pieces_; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> breaks_;
  double sup_ = 0.0;
  double deriv_sup_ = 0.0;
  std::optional<BumpParams> bump_;
  std::optional<Piecewise> pieces_;
};

}  // namespace bvpair
