#include <algorithm>
#include <cmath>
#include <random>

#include "bvpair/bv.hpp"
#include "bvpair/cantor.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bvpair;
using testing::bv;

TEST_CASE("eval_sided and representatives") {
  const BVFunction chi = bv("jumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  const auto [l, r] = chi.eval_sided(0.0);
  CHECK(l == 0.0);
  CHECK(r == 1.0);

  const Representatives rep = chi.representatives(0.0, 0.25);
  CHECK(rep.u_minus == 0.0);
  CHECK(rep.u_plus == 1.0);
  CHECK(rep.u_lambda == 0.25);
  CHECK(rep.nu == 1);
  CHECK_FALSE(rep.u_tilde.has_value());

  // At the downward jump the inward side is the left one.
  const Representatives r1 = chi.representatives(1.0, 0.0);
  CHECK(r1.nu == -1);
  CHECK(r1.u_i == 1.0);
  CHECK(r1.u_e == 0.0);

  const BVFunction c = bv("cantor = [{weight = 1.0, lo = 0.0, hi = 1.0}]", -0.5, 1.5);
  const auto [cl, cr] = c.eval_sided(0.5);
  CHECK(cl == 0.5);
  CHECK(cr == 0.5);
  const Representatives rc = c.representatives(0.3, 0.9);
  REQUIRE(rc.u_tilde.has_value());
  CHECK(rc.u_lambda == *rc.u_tilde);

  const BVFunction xj = bv("ac = \"x\"\njumps = [{x = 0.0, size = 1.0}]", -1.0, 1.0);
  const auto [xl, xr] = xj.eval_sided(0.0);
  CHECK(std::abs(xl - 0.0) < 1e-15);
  CHECK(std::abs(xr - 1.0) < 1e-15);
}

TEST_CASE("derivative parts") {
  const BVFunction chi = bv("jumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  const Measure d = chi.derivative();
  CHECK(d.atom(0.0) == 1.0);
  CHECK(d.atom(1.0) == -1.0);
  CHECK(d.densities().empty());
  CHECK(d.cantor().empty());

  const BVFunction c = bv("cantor = [{weight = 1.0, lo = 0.0, hi = 1.0}]", -0.5, 1.5);
  CHECK(measure_eval(c.derivative(), Interval::open(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  const BVFunction x = bv("ac = \"x\"", 0.0, 1.0);
  CHECK(measure_eval(x.derivative(), Interval::open(0.2, 0.7)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("total variation") {
  const BVFunction u = bv("ac = \"0.25*x\"\njumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  CHECK(u.total_variation() == doctest::Approx(3.0).epsilon(1e-13));
  const BVFunction s = bv("ac = \"sin(x)\"\nmonotone_breaks = [\"-pi/2\", \"pi/2\"]", -3.0, 3.0);
  // sin falls from sin(-3) to -1, rises to 1, falls to sin(3).
  const double expect = 2.0 * (1.0 - std::sin(3.0)) + 2.0;
  CHECK(s.total_variation() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("level sets") {
  const BVFunction chi = bv("jumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  const LevelSet e = bv_level_set(chi, 0.5);
  CHECK(e.regular);
  REQUIRE(e.set.intervals().size() == 1);
  CHECK(e.set.intervals()[0].first == 0.0);
  CHECK(e.set.intervals()[0].second == 1.0);

  const BVFunction x = bv("ac = \"x\"", 0.0, 1.0);
  const LevelSet ex = bv_level_set(x, 0.3);
  CHECK(ex.regular);
  CHECK(ex.set.intervals()[0].first == doctest::Approx(0.3).epsilon(1e-11));
  CHECK(ex.set.intervals()[0].second == 1.0);

  const BVFunction c = bv("cantor = [{weight = 1.0, lo = 0.0, hi = 1.0}]", -0.5, 1.5);
  const LevelSet ec = bv_level_set(c, 1.0 / 3.0);
  // c = 1/3 only at x = 1/4, which is not on a plateau, so the level is regular
  CHECK(ec.regular);
  CHECK(bv_level_set(c, 0.5).regular == false);
  CHECK(ec.set.intervals()[0].first == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ec.set.intervals()[0].second == 1.5);
}

TEST_CASE("bv_chi") {
  const BVFunction x = bv("ac = \"x\"", 0.0, 1.0);
  const BVFunction h = bv_chi(x, 0.5);
  REQUIRE(h.jumps().size() == 1);
  CHECK(h.jumps()[0].x == doctest::Approx(0.5));
  CHECK(h.jumps()[0].size() == 1.0);

  const BVFunction m = bv("ac = \"-x\"", -1.0, 0.0);
  const BVFunction hm = bv_chi(m, 0.5);
  REQUIRE(hm.jumps().size() == 1);
  CHECK(hm.jumps()[0].x == doctest::Approx(-0.5));
  CHECK(hm.jumps()[0].size() == -1.0);
  CHECK(hm.value(-0.9) == 1.0);
}

TEST_CASE("fundamental theorem, ordering and orientation on a mixed function") {
  const BVFunction u = bv(
      "ac = \"0.3*sin(2*x)\"\nmonotone_breaks = [\"-pi/4\", \"pi/4\", \"3*pi/4\"]\n"
      "jumps = [{x = -0.5, size = 0.7}, {x = 0.4, size = -1.2}]\n"
      "cantor = [{weight = 0.5, lo = 0.6, hi = 1.2}]",
      -1.5, 2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.5, 2.0), L(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double c = U(rng), d = U(rng);
    if (c > d) std::swap(c, d);
    const double lhs = measure_eval(u.derivative(), Interval::open(c, d));
    CHECK(std::abs(lhs - (u.eval(d, Side::Left) - u.eval(c, Side::Right))) < 1e-12);
    const Representatives r = u.representatives(c, L(rng));
    CHECK(r.u_minus <= r.u_lambda);
    CHECK(r.u_lambda <= r.u_plus);
  }
  for (const JumpPoint& j : u.jumps()) {
    CHECK(j.nu * (j.right - j.left) == doctest::Approx(j.u_plus - j.u_minus));
    CHECK(j.u_i == j.u_plus);
    CHECK(j.u_e == j.u_minus);
    CHECK(j.u_plus > j.u_minus);
  }
}

TEST_CASE("coarea for |Du| and traces of level sets") {
  const BVFunction u = bv(
      "ac = \"0.25*x\"\njumps = [{x = 0.0, size = 1.0}, {x = 1.0, size = -1.0}]", -2.0, 2.0);
  // Perimeter of {u > t} inside the domain, integrated over t and split at
  // the jump values.
  auto per = [&](double t) {
    const LevelSet e = bv_level_set(u, t);
    double p = 0.0;
    for (const auto& [a, b] : e.set.intervals()) p += (a > u.lo()) + (b < u.hi());
    return p;
  };
  std::vector<double> splits = exceptional_values(u);
  // the perimeter also changes where t crosses the boundary values of u
  splits.push_back(u.eval(u.lo(), Side::Right));
  splits.push_back(u.eval(u.hi(), Side::Left));
  std::sort(splits.begin(), splits.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    const double a = splits[i], b = splits[i + 1];
    total += per(0.5 * (a + b)) * (b - a);  // perimeter is constant between exceptional values
  }
  CHECK(std::abs(total - u.total_variation()) < 1e-6);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> X(-1.9, 1.9), T(-0.4, 1.4);
  for (int i = 0; i < 50; ++i) {
    const double t = T(rng);
    const BVFunction h = bv_chi(u, t);
    const double x = X(rng);
    const auto [um, up] = u.eval_sided(x);
    const auto [hm, hp] = h.eval_sided(x);
    CHECK(std::min(hm, hp) == (std::min(um, up) > t ? 1.0 : 0.0));
    CHECK(std::max(hm, hp) == (std::max(um, up) > t ? 1.0 : 0.0));
  }
}
