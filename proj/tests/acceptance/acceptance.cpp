// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion holds. Usage: acceptance <scenario dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bvpair/cantor.hpp"
#include "bvpair/report.hpp"
#include "bvpair/scenario.hpp"
#include "bvpair/verify.hpp"

using namespace bvpair;

namespace {

struct Fixture {
  std::string file;
  Scenario sc;
  std::map<std::string, CheckResult> checks;
};

std::map<std::string, Fixture> g_fix;  // keyed by scenario name (S1 ... S6, S2b)

const CheckResult& check(const std::string& scen, const std::string& name) { return g_fix.at(scen).checks.at(name); }

double residual(const std::string& scen, const std::string& check_name, const std::string& key) {
  const CheckResult& c = check(scen, check_name);
  const auto it = c.residuals.find(key);
  return it == c.residuals.end() ? NAN : it->second;
}


// Accumulates sub-assertions of one criterion.
class Criterion {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void le(double v, double tol, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s = %.3g > %.3g", what.c_str(), v, tol);
    expect(v <= tol, buf);
    worst_ = std::max(worst_, tol > 0 ? v / tol : (v > 0 ? INFINITY : 0.0));
  }
  bool ok() const { return ok_; }
  std::string summary() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst residual/tolerance %.2g", worst_);
    return ok_ ? std::string(buf) : failures_;
  }

 private:
  bool ok_ = true;
  double worst_ = 0.0;
  std::string failures_;
};

const std::vector<std::string> kSix{"S1", "S2", "S3", "S4", "S5", "S6"};

Criterion c1_golden_atoms() {
  Criterion c;
  {
    const PairingContext& ctx = *g_fix.at("S2").sc.ctx;
    for (double l : {0.0, 0.25, 0.5, 1.0}) {
      const double a = ctx.internal(ctx.constant(l)).measure.atom(0.0);
      c.le(std::abs(a - (1.0 - 2.0 * l)), 1e-12, "S2 internal atom, lambda " + std::to_string(l));
    }
  }
  {
    const Scenario& sc = g_fix.at("S3").sc;
    const PairingContext& ctx = *sc.ctx;
    for (double l : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double a = ctx.internal(ctx.constant(l)).measure.atom(0.0);
      c.le(std::abs(a + 2.0 * l * (1.0 - l)), 1e-12, "S3 internal atom, lambda " + std::to_string(l));
    }
    c.le(std::abs(ctx.L().pm.measure.atom(0.0) + 0.5), 1e-9, "S3 L atom");
    const VResult V = ctx.V();
    c.le(std::abs(V.pm.measure.atom(0.0)), 1e-10, "S3 V atom");
    c.le(std::abs(V.theta_V.front()), 1e-10, "S3 Theta_V(0)");
    // weak oracle: -int v phi' dx - int F(u^lambda) phi dsigma
    for (const TestFunction& phi : sc.phi) {
      const PairingMeasure pm = ctx.internal(ctx.constant(0.5));
      c.le(std::abs(measure_pair(pm.measure, phi, ctx.opt()) - ctx.weak_pair(pm, phi)), 1e-10, "S3 weak oracle");
    }
  }
  return c;
}

Criterion c2_weak_form() {
  Criterion c;
  for (const std::string& s : kSix) {
    const Scenario& sc = g_fix.at(s).sc;
    const PairingContext& ctx = *sc.ctx;
    c.expect(sc.phi.size() >= 3, s + " has fewer than three test functions");
    const std::vector<PairingMeasure> pms{ctx.internal(ctx.constant(0.5)), ctx.external(ctx.constant(0.5)),
                                          ctx.standard(), ctx.L().pm, ctx.V().pm};
    for (const PairingMeasure& pm : pms)
      for (const TestFunction& phi : sc.phi)
        c.le(std::abs(measure_pair(pm.measure, phi, ctx.opt()) - ctx.weak_pair(pm, phi)), 1e-7,
             s + " " + to_string(pm.variant));
    c.le(residual(s, "representation", "weak_form"), 1e-7, s + " representation.weak_form");
  }
  return c;
}

Criterion c3_representation() {
  Criterion c;
  for (const std::string& s : kSix) {
    const double tol = s == "S4" ? 1e-4 : 1e-6;
    c.le(residual(s, "representation", "grid"), tol, s + " grid");
    c.le(residual(s, "representation", "phi"), tol, s + " phi");
  }
  const nlohmann::json& total = check("S4", "representation").details["total"];
  c.le(std::abs(total["definition"].get<double>() - 0.5), 1e-6, "S4 total over Omega");
  c.le(std::abs(total["densities"].get<double>() - 0.5), 1e-6, "S4 total from densities");
  return c;
}

Criterion c4_coarea() {
  Criterion c;
  for (const std::string& s : kSix) c.le(residual(s, "coarea", "external"), 1e-6, s + " external");
  const CheckResult& neg = check("S3", "coarea_negative");
  const Scenario& sc = g_fix.at("S3").sc;
  const double phi0 = sc.phi_named(neg.details["phi"].get<std::string>())(0.0);
  c.expect(phi0 == 1.0, "bundled bump has phi(0) != 1");
  c.le(std::abs(neg.details["gap"].get<double>() - 0.5 * phi0), 1e-3, "S3 negative gap");
  return c;
}

Criterion c5_gauss_green() {
  Criterion c;
  for (const std::string& s : kSix) {
    for (const char* k : {"open_external", "closed_external", "open_internal", "closed_internal"})
      c.le(residual(s, "gauss_green", k), 1e-8, s + " " + k);
    const int n = check(s, "gauss_green").details.value("random_intervals", 0);
    c.expect(n >= 10, s + " used fewer than 10 random intervals");
  }
  // Hand values on S2.
  const PairingContext& ctx = *g_fix.at("S2").sc.ctx;
  for (double l : {0.0, 0.25, 0.5, 1.0}) {
    const GaussGreen e1 = gauss_green_terms(ctx, FinitePerimeterSet({{-1.0, 0.5}}), l);
    for (int k = 0; k < 4; ++k) {
      c.le(std::abs(e1.lhs[k] - 1.0), 1e-12, "S2 E=[-1,1/2] lhs");
      c.le(std::abs(e1.rhs[k] - 1.0), 1e-12, "S2 E=[-1,1/2] rhs");
    }
    // E = [0, 1/2]: the open set does not see the jump at 0 (value 0), the
    // closed set does (value 1).
    const GaussGreen e2 = gauss_green_terms(ctx, FinitePerimeterSet({{0.0, 0.5}}), l);
    for (int k : {0, 2}) {
      c.le(std::abs(e2.lhs[k]), 1e-12, "S2 E=[0,1/2] open lhs");
      c.le(std::abs(e2.rhs[k]), 1e-12, "S2 E=[0,1/2] open rhs");
    }
    for (int k : {1, 3}) {
      c.le(std::abs(e2.lhs[k] - 1.0), 1e-12, "S2 E=[0,1/2] closed lhs");
      c.le(std::abs(e2.rhs[k] - 1.0), 1e-12, "S2 E=[0,1/2] closed rhs");
    }
  }
  return c;
}

Criterion c6_tv_bound() {
  Criterion c;
  for (const std::string& s : kSix) c.le(residual(s, "misc", "tv_bound"), 1e-10, s + " tv_bound");
  return c;
}

Criterion c7_legame() {
  Criterion c;
  for (const std::string& s : kSix) {
    c.le(residual(s, "misc", "legame_forward"), 1e-10, s + " forward matching");
    const CheckResult& m = check(s, "misc");
    if (m.details.value("F_monotone_on_jumps", false))
      c.le(residual(s, "misc", "legame_reverse"), 1e-10, s + " R on monotone F");
  }
  return c;
}

Criterion c8_lsc() {
  Criterion c;
  for (const std::string s : {"S2", "S3"}) {
    c.le(residual(s, "lsc_L", "liminf"), 1e-6, s + " L liminf");
    c.le(residual(s, "lsc_L", "tail"), 0.0, s + " L tail");
    const std::size_t rows = check(s, "lsc_L").details["values"].size();
    c.expect(rows >= 11, s + " lambda grid has fewer than 11 points");
  }
  const nlohmann::json& conv = check("S3", "lsc_converse").details;
  c.expect(conv["lambda"].get<double>() == 0.0, "converse uses lambda != 0");
  const double phi0 = g_fix.at("S3").sc.phi_named(conv["phi"].get<std::string>())(0.0);
  c.le(std::abs(conv["gap"].get<double>() - 0.5 * phi0), 1e-3, "S3 converse gap");
  for (const std::string s : {"S2", "S3", "S2b"}) c.le(residual(s, "lsc_V", "liminf"), 1e-5, s + " V liminf");
  return c;
}

Criterion c9_recovery() {
  Criterion c;
  for (const std::string s : {"S2", "S3"}) {
    const CheckResult& r = check(s, "recovery");
    const Table& t = r.tables.at(0);
    c.expect(t.rows.back().n == 16384, s + " table does not reach n = 2^14");
    c.le(t.rows.back().abs_error, 1e-3, s + " error at 2^14");
    const double rate = r.details["rate"].get<double>();
    c.expect(rate >= 0.9, s + " fitted rate " + std::to_string(rate) + " < 0.9");
  }
  return c;
}

Criterion c10_relaxation() {
  Criterion c;
  const std::map<std::string, double> factor{{"S2", -1.0}, {"S3", -0.5}};
  for (const auto& [s, f] : factor) {
    const CheckResult& r = check(s, "relaxation");
    c.le(residual(s, "relaxation", "attainment"), 1e-4, s + " attainment");
    c.le(residual(s, "relaxation", "lower_bound"), 1e-4, s + " lower bound");
    c.le(residual(s, "relaxation", "witness_in_Lambda_M"), 1e-9, s + " witness in Lambda_M");
    const Scenario& sc = g_fix.at(s).sc;
    for (const auto& row : r.details["values"]) {
      const double phi0 = sc.phi_named(row["phi"].get<std::string>())(0.0);
      if (row["phi"] == "bump0")
        c.le(std::abs(row["minimum"].get<double>() - f * phi0), 1e-4, s + " minimum vs hand value");
    }
  }
  return c;
}

Criterion c11_invariants() {
  Criterion c;
  for (const auto& [name, fx] : g_fix)
    for (const auto& [cn, r] : fx.checks) c.expect(r.pass, name + "." + cn + " failed");
  // double(1/3) sits 1.9e-17 below 1/3; the Hoelder modulus of c lifts that to 2.5e-11.
  c.expect(std::abs(cantor_cdf(1.0 / 3.0) - 0.5) <= 1e-10, "c(1/3) != 1/2");
  c.expect(std::abs(cantor_cdf(0.25) - 1.0 / 3.0) <= 1e-15, "c(1/4) != 1/3");
  c.expect(cantor_cdf_rational(1, 3) == 0.5, "rational c(1/3) != 1/2");
  c.expect(std::abs(cantor_cdf_rational(1, 4) - 1.0 / 3.0) <= 1e-15, "rational c(1/4) != 1/3");
  return c;
}

std::string suite_bytes(int jobs) {
  std::vector<Report> reports;
  for (const auto& [name, fx] : g_fix) {
    RunOptions o;
    o.jobs = jobs;
    Report r = run_report(fx.sc, o);
    r.source = std::filesystem::path(fx.file).filename().string();
    reports.push_back(std::move(r));
  }
  return dump_json(suite_json(reports));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "scenarios";
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".toml") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::string first_report;
  {
    std::vector<Report> reports;
    for (const std::string& f : files) {
      Fixture fx;
      fx.file = f;
      fx.sc = parse_scenario(f);
      build_scenario(fx.sc);
      Report r = run_report(fx.sc, RunOptions{});
      r.source = std::filesystem::path(f).filename().string();
      for (const CheckResult& c : r.checks) fx.checks.emplace(c.name, c);
      reports.push_back(r);
      const std::string name = fx.sc.name;
      g_fix.emplace(name, std::move(fx));
    }
    first_report = dump_json(suite_json(reports));
  }
  const double single = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria{
      {"golden jump atoms", c1_golden_atoms},
      {"definition vs weak form", c2_weak_form},
      {"representation assembly", c3_representation},
      {"coarea", c4_coarea},
      {"Gauss-Green", c5_gauss_green},
      {"TV bound", c6_tv_bound},
      {"external/internal matching", c7_legame},
      {"lower semicontinuity", c8_lsc},
      {"recovery", c9_recovery},
      {"relaxation", c10_relaxation},
      {"invariant suites and Cantor values", c11_invariants},
  };
  bool all = true;
  int idx = 1;
  for (const auto& [name, fn] : criteria) {
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    all = all && c.ok();
    std::printf("%s criterion %2d: %s (%s)\n", c.ok() ? "PASS" : "FAIL", idx++, name.c_str(), c.summary().c_str());
  }
  {
    Criterion c;
    const std::string eight = suite_bytes(8);
    const std::string one = suite_bytes(1);
    c.expect(one == eight, "suite report differs between 1 and 8 workers");
    c.expect(one == first_report, "suite report differs between repeated runs");
    c.expect(single <= 60.0, "single-threaded suite took " + std::to_string(single) + " s");
    all = all && c.ok();
    char buf[128];
    std::snprintf(buf, sizeof buf, "byte-identical, %zu bytes; single-threaded suite %.1f s", one.size(), single);
    std::printf("%s criterion 12: determinism (%s)\n", c.ok() ? "PASS" : "FAIL", c.ok() ? buf : c.summary().c_str());
  }
  return all ? 0 : 1;
}
