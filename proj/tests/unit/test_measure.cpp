#include <algorithm>
#include <cmath>
#include <random>

#include "bvpair/cantor.hpp"
#include "bvpair/measure.hpp"
#include "bvpair/testfn.hpp"
#include "doctest.h"

using namespace bvpair;

namespace {

Density lebesgue_density(double c = 1.0) { return Density{[c](double) { return c; }, {}, {}, std::abs(c)}; }

Measure cantor_measure(double w = 1.0) {
  Measure m(-1.0, 2.0);
  m.add_cantor(0.0, 1.0, w);
  return m;
}

}  // namespace

TEST_CASE("cantor_cdf ternary values") {
  // The double nearest 1/3 lies 1.9e-17 below it; the 1/log2(3)-Hoelder
  // modulus turns that into a 2.5e-11 drop. The rational entry point is exact.
  CHECK(std::abs(cantor_cdf(1.0 / 3.0) - 0.5) < 1e-10);
  CHECK(std::abs(cantor_cdf(0.25) - 1.0 / 3.0) < 1e-15);
  CHECK(cantor_cdf(0.0) == 0.0);
  CHECK(cantor_cdf(1.0) == 1.0);
  CHECK(cantor_cdf_rational(1, 3) == 0.5);
  CHECK(std::abs(cantor_cdf_rational(1, 4) - 1.0 / 3.0) < 1e-15);
  // 1/9 = 0.01 (ternary) -> 0.01 (binary); 3/4 = 0.2020... -> 0.1010... = 2/3.
  CHECK(cantor_cdf_rational(1, 9) == 0.25);
  CHECK(std::abs(cantor_cdf_rational(3, 4) - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("cantor_cdf symmetry, monotonicity and plateaus") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double x = U(rng), y = U(rng);
    CHECK(std::abs(cantor_cdf(1.0 - x) - (1.0 - cantor_cdf(x))) < 1e-14);
    if (x < y) CHECK(cantor_cdf(x) <= cantor_cdf(y));
    // self-similarity c(x/3) = c(x)/2
    CHECK(std::abs(cantor_cdf(x / 3.0) - 0.5 * cantor_cdf(x)) < 1e-15);
  }
  for (double x : {0.34, 0.4, 0.5, 0.6, 0.66}) CHECK(cantor_cdf(x) == 0.5);
  for (double x : {0.12, 0.15, 0.2}) CHECK(cantor_cdf(x) == 0.25);
}

TEST_CASE("measure_eval examples") {
  Measure leb(0.0, 1.0);
  leb.add_density(1.0, lebesgue_density());
  CHECK(measure_eval(leb, Interval::closed(0.0, 0.5)) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK(measure_eval(cantor_measure(), Interval::closed(0.0, 1.0 / 3.0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(measure_eval(cantor_measure(), Interval::open(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  Measure at(-1.0, 1.0);
  at.add_atom(0.0, 2.0);
  CHECK(measure_eval(at, Interval::point(0.0)) == 2.0);
  CHECK(measure_eval(at, Interval::open(0.0, 1.0)) == 0.0);
}

TEST_CASE("measure_pair examples") {
  const TestFunction phi = TestFunction::bump(0.0, 0.5);
  Measure d(-1.0, 1.0);
  d.add_atom(0.0, 1.0);
  CHECK(measure_pair(d, phi) == doctest::Approx(phi(0.0)));

  // <Cantor measure, x> = 1/2 by the x -> 1 - x symmetry.
  const double v = measure_pair_fn(cantor_measure(), [](double x) { return x; }, 0.0, 1.0, {});
  CHECK(std::abs(v - 0.5) < 1e-10);

  Measure lin(0.0, 1.0);
  lin.add_density(1.0, Density{[](double x) { return 2.0 * x; }, {}, {}, 2.0});
  CHECK(measure_pair_fn(lin, [](double) { return 1.0; }, 0.0, 1.0, {}) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("measure_tv examples") {
  Measure a(-1.0, 1.0);
  a.add_atom(0.0, -3.0);
  const JordanParts ja = measure_tv(a);
  CHECK(measure_eval(ja.tv, Interval::point(0.0)) == 3.0);
  CHECK(measure_eval(ja.pos, Interval::closed(-1.0, 1.0)) == 0.0);
  CHECK(measure_eval(ja.neg, Interval::point(0.0)) == 3.0);

  Measure s(0.0, 1.0);
  s.add_density(1.0, Density{[](double x) { return x < 0.5 ? -1.0 : 1.0; }, {0.5}, {}, 1.0});
  CHECK(measure_eval(measure_tv(s).tv, Interval::open(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-13));

  CHECK(measure_eval(measure_tv(cantor_measure(-2.0)).tv, Interval::open(0.0, 1.0)) ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("measure_combine and restrict") {
  Measure d0(-1.0, 2.0);
  d0.add_atom(0.0, 1.0);
  Measure z = measure_combine({{1.0, d0}, {-1.0, d0}});
  z.drop_zero_atoms();
  CHECK(z.atoms().empty());

  Measure leb(0.0, 1.0);
  leb.add_density(1.0, lebesgue_density());
  CHECK(measure_eval(measure_combine({{2.0, leb}}), Interval::open(0.0, 1.0)) == doctest::Approx(2.0));

  Measure two = d0;
  two.add_atom(1.0, 1.0);
  const Measure r = measure_restrict(two, BorelSet::of(Interval::point(0.0)));
  CHECK(measure_eval(r, Interval::closed(-1.0, 2.0)) == 1.0);
  CHECK(r.atom(1.0) == 0.0);
}

TEST_CASE("measure_dominates examples") {
  Measure a(-1.0, 1.0), b(-1.0, 1.0);
  a.add_atom(0.0, 2.0);
  b.add_atom(0.0, 1.0);
  const std::vector<BorelSet> samples{BorelSet::of(Interval::point(0.0)), BorelSet::of(Interval::open(-1.0, 1.0))};
  CHECK(measure_dominates(a, b, samples, 0.0));
  CHECK_FALSE(measure_dominates(b, a, samples, 0.0));

  Measure l1(0.0, 1.0), lh(0.0, 1.0);
  l1.add_density(1.0, lebesgue_density());
  lh.add_density(0.5, lebesgue_density());
  CHECK(measure_dominates(l1, lh, {BorelSet::of(Interval::open(0.0, 1.0))}, 0.0));
}

TEST_CASE("additivity, Jordan identity and pairing bound on a mixed measure") {
  Measure m(-1.0, 2.0);
  m.add_density(1.0, Density{[](double x) { return std::sin(5.0 * x); }, {}, {}, 1.0});
  m.add_atom(0.25, -0.7);
  m.add_atom(1.5, 0.3);
  m.add_cantor(0.0, 1.0, -0.8);
  const JordanParts j = measure_tv(m);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> cuts{-1.0, 2.0};
    for (int k = 0; k < 7; ++k) cuts.push_back(U(rng));
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      sum += measure_eval(m, Interval{cuts[i], cuts[i + 1], i == 0, true});
    CHECK(std::abs(sum - measure_eval(m, Interval::closed(-1.0, 2.0))) < 1e-12);

    const Interval s{std::min(cuts[2], cuts[5]), std::max(cuts[2], cuts[5]), true, false};
    CHECK(std::abs(measure_eval(j.pos, s) - measure_eval(j.neg, s) - measure_eval(m, s)) < 1e-12);
  }
  for (const TestFunction& phi : {TestFunction::bump(0.5, 0.6), TestFunction::bump(0.0, 0.5)}) {
    const double tv = measure_eval(j.tv, Interval::open(phi.support_lo(), phi.support_hi()));
    CHECK(std::abs(measure_pair(m, phi)) <= phi.sup() * tv + 1e-10);
  }
  // The Cantor part carries no mass on finite sets.
  for (double x : {0.0, 1.0 / 3.0, 0.25, 1.0}) CHECK(measure_eval(m, Interval::point(x)) == m.atom(x));
}
