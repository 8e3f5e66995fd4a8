#include <cmath>
#include <random>

#include "bvpair/field.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bvpair;
using testing::fixture;

namespace {

Locator atom(double x) { return Locator{Locator::Kind::Atom, x, 0}; }

}  // namespace

TEST_CASE("primitive B on S2 and S3") {
  const Scenario s2 = fixture("s2_sign_linear.toml");
  CHECK(s2.field->B(0.0, Side::Right, 2.0) == doctest::Approx(2.0));
  CHECK(s2.field->B(0.0, Side::Left, 2.0) == doctest::Approx(-2.0));
  CHECK(s2.field->B(0.7, Side::Right, 0.0) == 0.0);

  const Scenario s3 = fixture("s3_sign_nonlinear.toml");
  CHECK(std::abs(s3.field->B(0.0, Side::Right, 1.0)) < 1e-14);
  // G(t) = t - t^2 on [0, 1].
  CHECK(s3.field->B(0.3, Side::Right, 0.4) == doctest::Approx(0.4 - 0.16).epsilon(1e-14));
}

TEST_CASE("divergences of b_t and B_t") {
  const Scenario s3 = fixture("s3_sign_nonlinear.toml");
  const Measure d0 = s3.field->div_bt(0.0);
  CHECK(d0.atom(0.0) == doctest::Approx(2.0));
  CHECK(measure_eval(d0, Interval::closed(-2.0, 2.0)) == doctest::Approx(2.0));
  CHECK(std::abs(measure_eval(s3.field->div_bt(0.5), Interval::closed(-2.0, 2.0))) < 1e-14);
  CHECK(std::abs(measure_eval(s3.field->div_Bt(1.0), Interval::closed(-2.0, 2.0))) < 1e-14);

  const Scenario s2 = fixture("s2_sign_linear.toml");
  CHECK(s2.field->div_Bt(1.0).atom(0.0) == doctest::Approx(2.0));
  CHECK(std::abs(measure_eval(s2.field->div_Bt(0.0), Interval::closed(-2.0, 2.0))) < 1e-15);

  const Scenario s1 = fixture("s1_autonomous.toml");
  const Measure a = s1.field->div_bt(0.8);
  CHECK(a.atoms().empty());
  CHECK(std::abs(measure_eval(a, Interval::closed(-2.0, 2.0))) < 1e-15);
}

TEST_CASE("dominating system sigma and F") {
  const Scenario s2 = fixture("s2_sign_linear.toml");
  const SigmaSystem& sys2 = s2.ctx->sigma();
  CHECK(sys2.sigma_atom(0.0) == doctest::Approx(2.0));
  CHECK(sys2.f(atom(0.0), 0.3) == doctest::Approx(1.0));
  CHECK(sys2.F(atom(0.0), 0.7) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(sys2.F(atom(0.0), 0.0) == 0.0);

  const Scenario s3 = fixture("s3_sign_nonlinear.toml");
  const SigmaSystem& sys3 = s3.ctx->sigma();
  CHECK(sys3.sigma_atom(0.0) == doctest::Approx(2.0));
  CHECK(sys3.F(atom(0.0), 0.5) == doctest::Approx(0.25).epsilon(1e-14));

  const Scenario s5 = fixture("s5_tensor.toml");
  const SigmaSystem& sys5 = s5.ctx->sigma();
  CHECK(sys5.sigma_atom(0.0) == doctest::Approx(2.0));
  CHECK(sys5.sigma_atom(0.5) == doctest::Approx(2.0));
  for (double t : {-2.0, -0.5, 0.3, 1.7}) {
    CHECK(sys5.f(atom(0.0), t) == doctest::Approx(1.0));
    CHECK(sys5.f(atom(0.5), t) == doctest::Approx(std::clamp(t, -1.0, 1.0)));
  }
}

TEST_CASE("trace bundles") {
  const Scenario s2 = fixture("s2_sign_linear.toml");
  const TraceBundle tb = field_traces(*s2.field, 0.0, 1);
  for (double t : {-1.0, 0.2, 1.5}) {
    CHECK(tb.beta_i(t) == doctest::Approx(t));
    CHECK(tb.beta_e(t) == doctest::Approx(-t));
    CHECK(tb.gamma_i(t) == doctest::Approx(1.0));
    CHECK(tb.gamma_e(t) == doctest::Approx(-1.0));
  }
  const TraceBundle smooth = field_traces(*s2.field, 0.5, 1);
  CHECK(smooth.gamma_i(0.4) == smooth.gamma_e(0.4));

  const Scenario s3 = fixture("s3_sign_nonlinear.toml");
  const TraceBundle t3 = field_traces(*s3.field, 0.0, 1);
  for (double t : {0.0, 0.25, 0.8}) {
    const double g = 1.0 - 2.0 * t;
    CHECK(t3.gamma_i(t) == doctest::Approx(g));
    CHECK(t3.gamma_e(t) == doctest::Approx(-g));
  }
}

TEST_CASE("field invariants on every fixture") {
  for (const char* file : {"s1_autonomous.toml", "s2_sign_linear.toml", "s3_sign_nonlinear.toml", "s4_cantor.toml",
                           "s5_tensor.toml", "s6_smooth.toml"}) {
    CAPTURE(file);
    const Scenario sc = fixture(file);
    const Field& f = *sc.field;
    const SigmaSystem& sys = sc.ctx->sigma();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> T(-f.T(), f.T());
    for (double x0 : f.jump_points()) {
      const TraceBundle tb = field_traces(f, x0, 1);
      for (int k = 0; k < 16; ++k) {
        const double t = T(rng), s = T(rng);
        // beta_i - beta_e is the atom of Div B_t at x0.
        CHECK(std::abs(tb.beta_i(t) - tb.beta_e(t) - f.div_Bt(t).atom(x0)) < 1e-12);
        CHECK(std::abs(tb.beta_i(t) - tb.beta_i(s)) <= f.b_sup() * std::abs(t - s) + 1e-12);
        CHECK(std::abs(tb.beta_e(t) - tb.beta_e(s)) <= f.b_sup() * std::abs(t - s) + 1e-12);
      }
    }
    for (const auto& a : sys.atoms()) {
      CHECK(sys.F(atom(a.x), 0.0) == 0.0);
      for (int k = 0; k < 16; ++k) {
        const double t = T(rng), s = T(rng);
        CHECK(std::abs(sys.f(atom(a.x), t)) <= 1.0 + 1e-12);
        CHECK(std::abs(sys.F(atom(a.x), t) - sys.F(atom(a.x), s)) <= std::abs(t - s) + 1e-12);
      }
    }
    const Measure sigma = sys.sigma();
    std::vector<BorelSet> samples;
    std::uniform_real_distribution<double> X(sc.lo, sc.hi);
    for (int k = 0; k < 16; ++k) {
      double a = X(rng), b = X(rng);
      if (a > b) std::swap(a, b);
      samples.push_back(BorelSet::of(Interval::closed(a, b)));
    }
    for (double x0 : f.jump_points()) samples.push_back(BorelSet::of(Interval::point(x0)));
    for (int k = 0; k < 64; ++k) {
      const double t = -f.T() + 2.0 * f.T() * (k + 0.5) / 64.0;
      CHECK(measure_dominates(sigma, measure_tv(f.div_bt(t)).tv, samples, 1e-10));
    }
  }
}

TEST_CASE("composite traces and weak divergence") {
  for (const char* file : {"s2_sign_linear.toml", "s3_sign_nonlinear.toml", "s5_tensor.toml"}) {
    CAPTURE(file);
    const Scenario sc = fixture(file);
    const Composite& v = sc.ctx->composite();
    for (const JumpPoint& j : sc.u->jumps()) {
      const TraceBundle tb = field_traces(*sc.field, j.x, j.nu);
      const Side inner = j.nu > 0 ? Side::Right : Side::Left;
      const Side outer = j.nu > 0 ? Side::Left : Side::Right;
      CHECK(std::abs(j.nu * v.v(j.x, inner) - tb.beta_i(j.u_i)) < 1e-12);
      CHECK(std::abs(j.nu * v.v(j.x, outer) - tb.beta_e(j.u_e)) < 1e-12);
    }
    for (const TestFunction& phi : sc.phi) CHECK(std::abs(v.weak_div(phi) - v.structural_div(phi)) < 1e-8);
  }
}
