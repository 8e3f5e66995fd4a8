#pragma once

// Piecewise-linear recovery sequences: u_n equals u away from its jumps and
// ramps through u^lambda(x_j) on [x_j - h_j, x_j + h_j].

#include <vector>

#include "bvpair/bv.hpp"
#include "bvpair/field.hpp"
#include "bvpair/pairing.hpp"
#include "bvpair/testfn.hpp"

namespace bvpair {

struct ClCertificate {
  int n = 0;
  double l1_distance = 0.0;
  double pr_margin = 0.0;  // min over sigma atoms of the distance of u_n(x) to the complement of [u-, u+]
  double g = 0.0;          // dominating constant ||u||_inf
  double sup_un = 0.0;     // ||u_n||_inf
  double strict_gap = 0.0;  // | |Du_n|(Omega) - |Du|(Omega) |
  double h_max = 0.0;
};

struct ClApprox {
  BVFunction un;
  ClCertificate cert;
  std::vector<double> breaks;  // ramp ends and centers
};

// Throws JUMPS_TOO_CLOSE when two jumps are at most 6/n apart and
// INVALID_ARGUMENT when u has a Cantor part.
ClApprox gen_cl_sequence(const BVFunction& u, const Selection& sel, int n,
                         const std::vector<double>& sigma_atoms = {});

// Smallest power of two 2^k, k >= kmin, for which the CL construction is valid.
int cl_min_n(const BVFunction& u, int kmin = 3);
// Powers of two from max(2^kmin, cl_min_n) to 2^kmax.
std::vector<int> cl_ladder(const BVFunction& u, int kmin = 3, int kmax = 14);

// int phi b(x, u_n) u_n' dx: the pairing of u_n (a W^{1,1} function) with phi.
double cl_pair(const Field& f, const ClApprox& a, const TestFunction& phi, const QuadOptions& opt);
// int_a^b |b(x, u_n) u_n'| dx.
double cl_abs(const Field& f, const ClApprox& a, double lo, double hi, const QuadOptions& opt);

}  // namespace bvpair
