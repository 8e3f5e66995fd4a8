#pragma once

#include <cstdint>

namespace bvpair {

// Cantor-Lebesgue function on [0, 1] computed from the exact binary value of
// `x`: ternary digits are generated with integer arithmetic, a digit 1 stops
// the scan, digits 0/2 become binary 0/1. `precision` is the number of ternary
// digits scanned. Values outside [0, 1] are clamped.
double cantor_cdf(double x, int precision = 64);

// Same algorithm on the rational num/den in [0, 1]. Used as a test oracle.
double cantor_cdf_rational(std::uint64_t num, std::uint64_t den, int precision = 64);

// One affine copy of the middle-thirds Cantor measure, scaled by `weight`.
struct CantorComponent {
  double weight = 1.0;
  double lo = 0.0;
  double hi = 1.0;

  double cdf(double x) const { return cantor_cdf((x - lo) / (hi - lo)); }
  // Unweighted mass of [a, b] (the measure has no atoms).
  double mass(double a, double b) const;
};

}  // namespace bvpair
