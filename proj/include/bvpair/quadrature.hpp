#pragma once

#include <functional>
#include <vector>

#include "bvpair/cantor.hpp"

namespace bvpair {

struct QuadOptions {
  double abs_tol = 1e-10;
  long max_evals = 4'000'000;
  // Levels of middle-third splitting used for Lebesgue integrals across a
  // Cantor support; below this level leaves use the midpoint rule.
  int gap_depth = 12;
  // Maximum and minimum self-similar recursion depth for Cantor integrals.
  int cantor_depth = 20;
  int cantor_min_depth = 6;
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b], split at every
// break and handled by middle-third recursion on each rough segment (a
// Cantor support on which f is only Holder continuous). Throws TOL_NOT_MET
// when the evaluation budget runs out.
double integrate(const Fn& f, double a, double b, const std::vector<double>& breaks,
                 const std::vector<Segment>& rough, const QuadOptions& opt);

inline double integrate(const Fn& f, double a, double b, const QuadOptions& opt = {}) {
  return integrate(f, a, b, {}, {}, opt);
}

// Integral of f against the unweighted Cantor measure of `k` restricted to
// [a, b], via the self-similarity recursion with midpoint leaves.
double integrate_cantor(const Fn& f, const CantorComponent& k, double a, double b, const QuadOptions& opt);

// Fixed 15-point Kronrod rule on [a, b] (no adaptivity).
double kronrod15(const Fn& f, double a, double b);

}  // namespace bvpair
