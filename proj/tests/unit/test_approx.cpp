#include <cmath>

#include "bvpair/approx.hpp"
#include "bvpair/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bvpair;
using testing::bv;
using testing::fixture;

TEST_CASE("ramp through u^lambda") {
  const BVFunction chi = bv("jumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  Selection half;
  half.x = {0.0, 1.0};
  half.lambda = {0.5, 0.5};
  const ClApprox a = gen_cl_sequence(chi, half, 10, {0.0});
  CHECK(a.un.value(0.0) == doctest::Approx(0.5));
  CHECK(a.un.value(-0.1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.un.value(0.1) == doctest::Approx(1.0));
  CHECK(a.un.value(-0.05) == doctest::Approx(0.25));
  CHECK(a.un.value(1.0) == doctest::Approx(0.5));
  CHECK(a.un.total_variation() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(a.cert.strict_gap <= 1e-12);
  CHECK(a.cert.h_max == doctest::Approx(0.1));
  // L1 distance: two triangles of area h/4 per jump.
  CHECK(a.cert.l1_distance == doctest::Approx(4 * 0.1 * 0.5 * 0.5).epsilon(1e-10));
  CHECK(a.cert.pr_margin >= 0.0);

  Selection zero = half;
  zero.lambda = {0.0, 0.0};
  CHECK(gen_cl_sequence(chi, zero, 10).un.value(0.0) == 0.0);
}

TEST_CASE("L1 distance decays like 1/n") {
  const BVFunction u = bv("ac = \"0.25*x\"\njumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  Selection s;
  s.x = {0.0, 1.0};
  s.lambda = {0.3, 0.8};
  double prev = 0.0;
  for (int n : cl_ladder(u, 3, 10)) {
    const ClApprox a = gen_cl_sequence(u, s, n);
    CHECK(a.cert.l1_distance * n <= 2.0);
    // the ramp over the downward jump cancels 2h of the upward drift
    CHECK(a.cert.strict_gap == doctest::Approx(1.0 / n).epsilon(1e-9));
    if (prev > 0.0) CHECK(a.cert.l1_distance < prev);
    prev = a.cert.l1_distance;
  }
}

TEST_CASE("smooth u is reproduced") {
  const BVFunction u = bv("ac = \"0.8*sin(2*x)\"\nmonotone_breaks = [\"-pi/4\", \"pi/4\"]", -1.5, 1.5);
  const ClApprox a = gen_cl_sequence(u, Selection{}, 16);
  for (double x : {-1.2, -0.3, 0.0, 0.9}) CHECK(a.un.value(x) == doctest::Approx(u.value(x)).epsilon(1e-14));
}

TEST_CASE("construction guards") {
  const BVFunction close = bv("jumps = [{x = 0.0, size = 1.0}, {x = 0.05, size = -1.0}]", -1.0, 1.0);
  Selection s;
  s.x = {0.0, 0.05};
  s.lambda = {0.5, 0.5};
  CHECK_THROWS_AS(gen_cl_sequence(close, s, 16), Error);
  CHECK(cl_min_n(close, 3) == 128);

  const BVFunction c = bv("cantor = [{weight = 1.0, lo = 0.0, hi = 1.0}]", -0.5, 1.5);
  CHECK_THROWS_AS(gen_cl_sequence(c, Selection{}, 16), Error);
}

TEST_CASE("S3 ramp integral at the maximizer") {
  const Scenario sc = fixture("s3_sign_nonlinear.toml");
  const PairingContext& ctx = *sc.ctx;
  const TestFunction& phi = sc.phi_named("bump0");
  // Integral over the ramp through u^(1/2) = 1/2: -2 (m - m^2) phi(0) with m = 1/2.
  const ClApprox a = gen_cl_sequence(*sc.u, ctx.constant(0.5), 1 << 12);
  CHECK(cl_pair(*sc.field, a, phi, ctx.opt()) == doctest::Approx(-0.5).epsilon(1e-4));
}
