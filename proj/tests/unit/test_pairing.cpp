#include <cmath>
#include <random>

#include "bvpair/error.hpp"
#include "bvpair/pairing.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bvpair;
using testing::fixture;

TEST_CASE("S2 golden atoms") {
  const Scenario sc = fixture("s2_sign_linear.toml");
  const PairingContext& ctx = *sc.ctx;
  for (double l : {0.0, 0.25, 0.5, 1.0}) {
    const Measure m = ctx.internal(ctx.constant(l)).measure;
    CHECK(std::abs(m.atom(0.0) - (1.0 - 2.0 * l)) < 1e-12);
    CHECK(std::abs(m.atom(1.0) - (-1.0)) < 1e-12);
    // F is linear in t, so the external and internal atoms coincide.
    CHECK(std::abs(ctx.external(ctx.constant(l)).measure.atom(0.0) - (1.0 - 2.0 * l)) < 1e-12);
  }
  const LResult L = ctx.L();
  CHECK(std::abs(L.pm.measure.atom(0.0) + 1.0) < 1e-9);
  CHECK(L.witness.lambda.front() == doctest::Approx(1.0));
  const VResult V = ctx.V();
  CHECK(std::abs(V.pm.measure.atom(0.0)) < 1e-10);
}

TEST_CASE("S3 golden atoms") {
  const Scenario sc = fixture("s3_sign_nonlinear.toml");
  const PairingContext& ctx = *sc.ctx;
  for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(std::abs(ctx.internal(ctx.constant(l)).measure.atom(0.0) + 2.0 * l * (1.0 - l)) < 1e-12);
    CHECK(std::abs(ctx.external(ctx.constant(l)).measure.atom(0.0)) < 1e-12);
  }
  const LResult L = ctx.L();
  CHECK(std::abs(L.pm.measure.atom(0.0) + 0.5) < 1e-9);
  CHECK(L.F_hat.front() == doctest::Approx(0.25).epsilon(1e-9));
  // F is quadratic at its maximizer, so the argmax is only good to about sqrt(eps).
  CHECK(std::abs(L.witness.lambda.front() - 0.5) < 1e-7);
  const VResult V = ctx.V();
  CHECK(std::abs(V.pm.measure.atom(0.0)) < 1e-10);
  CHECK(std::abs(V.theta_V.front()) < 1e-10);
  CHECK(V.lambda_V.lambda.front() == 0.0);

  const MatchResult m = ctx.match_external(ctx.constant(1.0));
  CHECK(m.lambda.lambda.front() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.residual.front() < 1e-12);
}

TEST_CASE("S2b V atom with same-sign traces") {
  const Scenario sc = fixture("s2b_shifted_sign.toml");
  const VResult V = sc.ctx->V();
  CHECK(std::abs(V.pm.measure.atom(0.0) - 1.0) < 1e-10);
  CHECK(V.lambda_V.lambda.front() == doctest::Approx(1.0));
}

TEST_CASE("hand-computed weak form for S2") {
  // <pairing, phi> = -int B(x, u) phi' dx - F(0, u^lambda) phi(0) sigma({0})
  // with B(x, t) = t sign(x), u = indicator of (0, 1), sigma = 2 delta_0.
  const Scenario sc = fixture("s2_sign_linear.toml");
  const PairingContext& ctx = *sc.ctx;
  const TestFunction phi = TestFunction::bump(0.3, 1.0);
  const double B_term = -(phi(1.0) - phi(0.0));  // -int_0^1 phi' dx
  for (double l : {0.0, 0.3, 1.0}) {
    const double expect = B_term - l * 2.0 * phi(0.0);
    CHECK(std::abs(measure_pair(ctx.internal(ctx.constant(l)).measure, phi, ctx.opt()) - expect) < 1e-10);
  }
}

TEST_CASE("pairing invariants on fixtures") {
  for (const char* file : {"s1_autonomous.toml", "s2_sign_linear.toml", "s3_sign_nonlinear.toml", "s5_tensor.toml",
                           "s6_smooth.toml"}) {
    CAPTURE(file);
    const Scenario sc = fixture(file);
    const PairingContext& ctx = *sc.ctx;
    std::vector<PairingMeasure> all{ctx.internal(ctx.constant(0.3)), ctx.external(ctx.constant(0.6)),
                                    ctx.standard(), ctx.L().pm, ctx.V().pm};
    // weak form against every catalog test function
    for (const PairingMeasure& pm : all)
      for (const TestFunction& phi : sc.phi)
        CHECK(std::abs(measure_pair(pm.measure, phi, ctx.opt()) - ctx.weak_pair(pm, phi)) < 1e-7);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> X(sc.lo, sc.hi);
    const Measure du = measure_tv(sc.u->derivative()).tv;
    for (int k = 0; k < 100; ++k) {
      double a = X(rng), b = X(rng);
      if (a > b) std::swap(a, b);
      const Interval e = Interval::closed(a, b);
      const double bound = sc.field->b_sup() * measure_eval(du, e, ctx.opt());
      for (const PairingMeasure& pm : all)
        CHECK(measure_eval(measure_tv(pm.measure).tv, e, ctx.opt()) <= bound + 1e-10);
    }

    // internal atom equals zeta at u^lambda; L is minimal among the lambda grid
    const LResult L = ctx.L();
    const TestFunction& phi = sc.phi.front();
    const double Lv = measure_pair(L.pm.measure, phi, ctx.opt());
    for (int i = 0; i <= 10; ++i) {
      const double l = i / 10.0;
      const PairingMeasure pm = ctx.internal(ctx.constant(l));
      for (const JumpPoint& j : sc.u->jumps())
        CHECK(std::abs(pm.measure.atom(j.x) - ctx.zeta(j, (1.0 - l) * j.u_minus + l * j.u_plus)) < 1e-12);
      CHECK(Lv <= measure_pair(pm.measure, phi, ctx.opt()) + 1e-10);
    }
  }
}

TEST_CASE("variants agree off the jump set") {
  const Scenario sc = fixture("s5_tensor.toml");
  const PairingContext& ctx = *sc.ctx;
  const Measure a = ctx.internal(ctx.constant(0.2)).measure;
  const Measure b = ctx.external(ctx.constant(0.9)).measure;
  const Measure c = ctx.L().pm.measure;
  for (const auto& [lo, hi] : {std::pair{-1.9, -0.1}, std::pair{0.1, 0.45}, std::pair{0.55, 0.95}, std::pair{1.1, 1.9}}) {
    const Interval e = Interval::closed(lo, hi);
    CHECK(std::abs(measure_eval(a, e) - measure_eval(b, e)) < 1e-10);
    CHECK(std::abs(measure_eval(a, e) - measure_eval(c, e)) < 1e-10);
  }
}

TEST_CASE("density report for S2 jump") {
  const Scenario sc = fixture("s2_sign_linear.toml");
  const PairingContext& ctx = *sc.ctx;
  const DensityReport r = ctx.densities(ctx.internal(ctx.constant(0.25)));
  REQUIRE(r.jumps.size() == 2);
  CHECK(r.jumps[0].theta == doctest::Approx(0.5));
  CHECK(std::abs(r.jumps[0].trace_atom - r.jumps[0].atom) < 1e-10);
}

TEST_CASE("selection validation") {
  const Scenario sc = fixture("s2_sign_linear.toml");
  const PairingContext& ctx = *sc.ctx;
  Selection bad = ctx.constant(0.5);
  bad.lambda.pop_back();
  CHECK_THROWS_AS(ctx.internal(bad), Error);
}
