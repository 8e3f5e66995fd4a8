#include "bvpair/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "bvpair/approx.hpp"
#include "bvpair/error.hpp"

namespace bvpair {

using nlohmann::json;

void CheckResult::add(const std::string& key, double residual, double tol) {
  residuals[key] = residual;
  tolerances[key] = tol;
  if (!(residual <= tol)) pass = false;
}

std::uint64_t check_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return seed ^ h;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Portable uniform draws (the standard distributions are not specified
// bit-for-bit across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  bool coin() { return (gen_() >> 63) != 0; }

 private:
  std::mt19937_64 gen_;
};

// Everything a check needs: scenario, parameters and tolerance policy.
struct Job {
  const Scenario& sc;
  const PairingContext& ctx;
  const CheckSpec* spec;  // may be null
  double scale;
  Rng rng;
  CheckResult& out;

  const json& params() const {
    static const json empty = json::object();
    return spec ? spec->params : empty;
  }
  double num(const std::string& key, double def) const {
    const json& p = params();
    return p.contains(key) && p[key].is_number() ? p[key].get<double>() : def;
  }
  std::string str(const std::string& key, const std::string& def) const {
    const json& p = params();
    return p.contains(key) && p[key].is_string() ? p[key].get<std::string>() : def;
  }
  bool has(const std::string& key) const { return params().contains(key); }
  // Primary tolerance: the scenario override, else the default.
  double primary(double def) const { return scale * (spec && spec->tol ? *spec->tol : def); }
  // Secondary tolerance: params "<key>_tol", else the default.
  double secondary(const std::string& key, double def) const { return scale * num(key + "_tol", def); }
  void add(const std::string& key, double residual, double tol) { out.add(key, residual, tol); }
  const TestFunction& phi(const std::string& key) const {
    const std::string name = str(key, "");
    return name.empty() ? sc.phi.front() : sc.phi_named(name);
  }
};

std::vector<double> lambda_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
  return g;
}

Interval random_interval(Rng& rng, double lo, double hi) {
  const double pad = 0.02 * (hi - lo);
  double a = rng.uniform(lo + pad, hi - pad);
  double b = rng.uniform(lo + pad, hi - pad);
  if (a > b) std::swap(a, b);
  if (b - a < 1e-3) b = std::min(hi - pad, a + 1e-3);
  Interval i{a, b, rng.coin(), rng.coin()};
  return i;
}

std::vector<PairingMeasure> all_variants(const PairingContext& ctx, double param) {
  const Selection s = ctx.constant(param);
  return {ctx.internal(s), ctx.external(s), ctx.standard(), ctx.L().pm, ctx.V().pm};
}

std::string variant_label(const PairingMeasure& pm) {
  std::string s = to_string(pm.variant);
  if (pm.variant == Variant::Internal || pm.variant == Variant::External) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%g)", pm.selection.lambda.empty() ? pm.selection.provenance.value
                                                                        : pm.selection.lambda.front());
    s += buf;
  }
  return s;
}

bool positive_phi(const TestFunction& phi) {
  return !phi.bump_params() || phi.bump_params()->amplitude >= 0.0;
}

// Raw minimum over the trailing half of the ladder.
double trailing_min(const std::vector<double>& v) {
  double m = kInf;
  for (std::size_t i = v.size() / 2; i < v.size(); ++i) m = std::min(m, v[i]);
  return m;
}

// liminf estimate along a doubling ladder: Aitken extrapolation of the last
// three values. The contraction ratio r of successive differences is taken
// from the data (r = 2 for O(1/n) error, r = 4 for O(1/n^2)); a flat or
// non-contracting tail returns the last value. Oscillation and growth are
// caught separately by tail_defect.
double liminf_estimate(const std::vector<double>& v) {
  if (v.size() < 3) return v.empty() ? kInf : v.back();
  const std::size_t n = v.size();
  const double d1 = v[n - 2] - v[n - 3];
  const double d2 = v[n - 1] - v[n - 2];
  if (std::abs(d2) <= 1e-13 * std::max(1.0, std::abs(v[n - 1]))) return v[n - 1];
  const double r = d1 / d2;
  return r > 1.5 ? v[n - 1] + d2 / (r - 1.0) : v[n - 1];
}

// Growth of the last step relative to the previous one (0 when the tail
// contracts or is flat).
double tail_defect(const std::vector<double>& v) {
  if (v.size() < 3) return 0.0;
  const std::size_t n = v.size();
  const double d1 = std::abs(v[n - 2] - v[n - 3]);
  const double d2 = std::abs(v[n - 1] - v[n - 2]);
  return std::max(0.0, d2 - 10.0 * d1 - 1e-12);
}

bool cl_applicable(const Scenario& sc, Job& j) {
  if (sc.u->has_cantor()) {
    j.out.applicable = false;
    j.out.details["reason"] = "u has a Cantor part; recovery sequences must be W^{1,1}";
    return false;
  }
  return true;
}

// ------------------------------------------------------------- coarea RHS

struct CoareaTarget {
  double Lambda;
  const TestFunction* phi;
};

std::vector<double> coarea_h(const PairingContext& ctx, const std::vector<CoareaTarget>& targets, double t) {
  const Field& f = ctx.field();
  const BVFunction& u = ctx.u();
  const LevelSet ls = bv_level_set(u, t);
  const auto& iv = ls.set.intervals();
  std::vector<double> out(targets.size(), 0.0);
  const double b0 = f.autonomous() ? eval(f.autonomous()->b0, t) : 0.0;
  for (std::size_t q = 0; q < targets.size(); ++q) {
    const TestFunction& phi = *targets[q].phi;
    const double Lambda = targets[q].Lambda;
    double h = 0.0;
    for (const auto& [a, b] : iv) h -= b0 * (phi(b) - phi(a));
    for (const TensorTerm& k : f.terms()) {
      const double g = eval(k.g, t);
      if (g == 0.0) continue;
      double s = 0.0;
      for (const auto& [a, b] : iv) s += k.A->eval(b, Side::Left) * phi(b) - k.A->eval(a, Side::Right) * phi(a);
      for (const JumpPoint& ja : k.A->jumps()) {
        const double y = ja.x;
        const double py = phi(y);
        if (py == 0.0) continue;
        const auto [ul, ur] = u.eval_sided(y);
        const double um = std::min(ul, ur), up = std::max(ul, ur);
        const double chi = (1.0 - Lambda) * (um > t ? 1.0 : 0.0) + Lambda * (up > t ? 1.0 : 0.0);
        bool inside = false;
        for (const auto& [a, b] : iv) inside = inside || (a < y && y < b);
        s += ja.size() * py * (chi - (inside ? 1.0 : 0.0));
      }
      h -= g * s;
    }
    out[q] = h;
  }
  return out;
}

// t-values at which {u > t} changes discontinuously, plus Cantor plateau
// values up to the given depth.
std::vector<double> coarea_splits(const PairingContext& ctx, int plateau_depth) {
  const BVFunction& u = ctx.u();
  std::vector<double> s = exceptional_values(u);
  for (const JumpPoint& j : u.jumps()) {
    s.push_back(j.left);
    s.push_back(j.right);
  }
  for (const TensorTerm& k : ctx.field().terms())
    for (const JumpPoint& j : k.A->jumps()) {
      const auto [l, r] = u.eval_sided(j.x);
      s.push_back(l);
      s.push_back(r);
    }
  for (const MonotonePiece& p : u.monotone_pieces()) {
    s.push_back(u.eval(p.a, Side::Right));
    s.push_back(u.eval(p.b, Side::Left));
  }
  for (const CantorComponent& c : u.cantor()) {
    // Values of u at the centres of removed gaps down to plateau_depth.
    std::vector<std::pair<double, double>> nodes{{c.lo, c.hi}};
    for (int d = 0; d < plateau_depth; ++d) {
      std::vector<std::pair<double, double>> next;
      next.reserve(nodes.size() * 2);
      for (const auto& [l, h] : nodes) {
        const double third = (h - l) / 3.0;
        s.push_back(u.value(0.5 * (l + h)));
        next.emplace_back(l, l + third);
        next.emplace_back(h - third, h);
      }
      nodes.swap(next);
    }
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Vector-valued adaptive Gauss-Kronrod (7/15) on [a, b].
void gk_vec(const std::function<std::vector<double>(double)>& f, double a, double b, double tol, int depth,
            std::vector<double>& acc, long& evals) {
  static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                               0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                               0.207784955007898468, 0.000000000000000000};
  static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                               0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                               0.204432940075298892, 0.209482141084727828};
  static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                               0.417959183673469388};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<double> fc = f(c);
  const std::size_t m = fc.size();
  std::vector<double> K(m), G(m);
  for (std::size_t q = 0; q < m; ++q) {
    K[q] = wk[7] * fc[q];
    G[q] = wg[3] * fc[q];
  }
  for (int i = 0; i < 7; ++i) {
    const std::vector<double> f1 = f(c - h * xk[i]);
    const std::vector<double> f2 = f(c + h * xk[i]);
    for (std::size_t q = 0; q < m; ++q) {
      K[q] += wk[i] * (f1[q] + f2[q]);
      if (i % 2 == 1) G[q] += wg[i / 2] * (f1[q] + f2[q]);
    }
  }
  evals += 15;
  double err = 0.0;
  for (std::size_t q = 0; q < m; ++q) err = std::max(err, std::abs(K[q] - G[q]) * h);
  if (err <= tol || depth >= 40 || evals > 2'000'000) {
    for (std::size_t q = 0; q < m; ++q) acc[q] += K[q] * h;
    return;
  }
  gk_vec(f, a, c, 0.5 * tol, depth + 1, acc, evals);
  gk_vec(f, c, b, 0.5 * tol, depth + 1, acc, evals);
}

std::vector<double> coarea_rhs_many(const PairingContext& ctx, const std::vector<CoareaTarget>& targets,
                                    int plateau_depth) {
  const BVFunction& u = ctx.u();
  std::vector<double> s = coarea_splits(ctx, plateau_depth);
  const double S = u.sup_bound();
  s.push_back(-S);
  s.push_back(S);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<double> acc(targets.size(), 0.0);
  const auto h = [&](double t) { return coarea_h(ctx, targets, t); };
  const bool rough = u.has_cantor();
  long evals = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = std::max(s[i], -S), b = std::min(s[i + 1], S);
    if (!(b > a)) continue;
    if (rough) {
      // Two-point Gauss-Legendre on each plateau panel.
      const double c = 0.5 * (a + b), r = 0.5 * (b - a) / std::sqrt(3.0);
      const std::vector<double> f1 = h(c - r), f2 = h(c + r);
      for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += 0.5 * (b - a) * (f1[q] + f2[q]);
    } else {
      gk_vec(h, a, b, 1e-11, 0, acc, evals);
    }
  }
  return acc;
}

// -------------------------------------------------------------- sigma terms

// int_S F(x, t(x)) dsigma with t(x) = u~(x) off J_u and the variant's value at
// jump points (a convex combination of F values for the external kind).
double sigma_term(const PairingContext& ctx, const BorelSet& S, bool external, double param) {
  const SigmaSystem& sys = ctx.sigma();
  const BVFunction& u = ctx.u();
  const QuadOptions& opt = ctx.opt();
  double total = 0.0;
  for (const SigmaSystem::AtomPart& a : sys.atoms()) {
    if (!S.contains(a.x) || a.s * a.m == 0.0) continue;
    const Locator loc{Locator::Kind::Atom, a.x, 0};
    double Fv;
    if (const JumpPoint* j = u.jump_at(a.x)) {
      if (external)
        Fv = (1.0 - param) * sys.F(loc, j->u_minus) + param * sys.F(loc, j->u_plus);
      else
        Fv = sys.F(loc, (1.0 - param) * j->u_minus + param * j->u_plus);
    } else {
      Fv = sys.F(loc, u.value(a.x));
    }
    total += a.s * a.m * Fv;
  }
  bool any_ac = false;
  for (const TensorTerm& k : ctx.field().terms()) any_ac = any_ac || k.A->has_ac();
  const auto& groups = sys.cantor_groups();
  for (const Interval& part : S.parts()) {
    if (any_ac) {
      std::vector<double> br = ctx.composite().breaks();
      total += integrate(
          [&](double x) {
            const double m = sys.m_ac(x);
            if (m == 0.0) return 0.0;
            return sys.s_ac(x) * m * sys.F(Locator{Locator::Kind::Ac, x, 0}, u.value(x));
          },
          part.lo, part.hi, br, ctx.composite().cantor_supports(), opt);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const SigmaSystem::CantorGroup& g = groups[i];
      if (g.s * g.m == 0.0) continue;
      const Locator loc{Locator::Kind::Cantor, 0.0, static_cast<int>(i)};
      total += g.s * g.m *
               integrate_cantor([&](double x) { return sys.F(loc, u.value(x)); }, CantorComponent{1.0, g.lo, g.hi},
                                part.lo, part.hi, opt);
    }
  }
  return total;
}

// ===================================================================== checks

void check_representation(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  const double tol = j.primary(1e-6);
  j.out.tolerance = tol;
  std::vector<PairingMeasure> pms;
  for (const auto& [name, spec] : sc.selections) {
    if (spec.kind != SelectionKind::Const) continue;
    pms.push_back(ctx.internal(ctx.resolve(spec)));
  }
  for (PairingMeasure& pm : all_variants(ctx, 0.5)) pms.push_back(std::move(pm));
  // Interval grid: consecutive and nested intervals on a 9-point grid, open and closed.
  std::vector<Interval> grid;
  const int K = 8;
  std::vector<double> pts;
  for (int k = 1; k < K; ++k) pts.push_back(sc.lo + (sc.hi - sc.lo) * k / K);
  for (const JumpPoint& jp : sc.u->jumps()) pts.push_back(jp.x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      grid.push_back(Interval::open(pts[a], pts[b]));
      grid.push_back(Interval::closed(pts[a], pts[b]));
    }
  double grid_res = 0.0, phi_res = 0.0, weak_res = 0.0;
  json per = json::array();
  for (const PairingMeasure& pm : pms) {
    const Measure dm = ctx.density_measure(pm);
    double g = 0.0;
    for (const Interval& i : grid)
      g = std::max(g, std::abs(measure_eval(dm, i, ctx.opt()) - measure_eval(pm.measure, i, ctx.opt())));
    double p = 0.0, w = 0.0;
    json vals = json::array();
    for (std::size_t q = 0; q < sc.phi.size(); ++q) {
      const double A = measure_pair(pm.measure, sc.phi[q], ctx.opt());
      const double B = ctx.weak_pair(pm, sc.phi[q]);
      const double C = measure_pair(dm, sc.phi[q], ctx.opt());
      p = std::max(p, std::abs(C - A));
      w = std::max(w, std::abs(B - A));
      vals.push_back(json{{"phi", sc.phi_specs[q].name}, {"definition", A}, {"weak", B}, {"densities", C}});
    }
    grid_res = std::max(grid_res, g);
    phi_res = std::max(phi_res, p);
    weak_res = std::max(weak_res, w);
    per.push_back(json{{"variant", variant_label(pm)}, {"grid", g}, {"phi", p}, {"weak", w}, {"values", vals}});
  }
  j.out.details["variants"] = per;
  j.out.details["grid_intervals"] = grid.size();
  j.add("grid", grid_res, tol);
  j.add("phi", phi_res, tol);
  j.add("weak_form", weak_res, j.secondary("weak_form", 1e-7));

  if (ctx.field().kind() == FieldKind::Autonomous) {
    // Volpert: the pairing is D(B0 o u) computed from one-sided values of u.
    const Expr& B0 = ctx.field().autonomous()->B0;
    const PairingMeasure pm = ctx.internal(ctx.constant(0.5));
    double r = 0.0;
    for (const Interval& i : grid) {
      const double ub = i.include_hi ? sc.u->eval(i.hi, Side::Right) : sc.u->eval(i.hi, Side::Left);
      const double ua = i.include_lo ? sc.u->eval(i.lo, Side::Left) : sc.u->eval(i.lo, Side::Right);
      r = std::max(r, std::abs(measure_eval(pm.measure, i, ctx.opt()) - (eval(B0, ub) - eval(B0, ua))));
    }
    j.add("volpert", r, j.secondary("volpert", 1e-10));
  }
  if (j.has("expected_total")) {
    const double expected = j.num("expected_total", 0.0);
    const PairingMeasure pm = ctx.internal(ctx.constant(0.5));
    const Interval omega = Interval::open(sc.lo, sc.hi);
    const double A = measure_eval(pm.measure, omega, ctx.opt());
    const double C = measure_eval(ctx.density_measure(pm), omega, ctx.opt());
    j.out.details["total"] = json{{"definition", A}, {"densities", C}, {"expected", expected}};
    j.add("total", std::max(std::abs(A - expected), std::abs(C - expected)), j.secondary("total", 1e-6));
  }
}

void check_coarea(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  const double tol = j.primary(1e-6);
  j.out.tolerance = tol;
  const std::vector<double> Lambdas{0.0, 0.5, 1.0};
  std::vector<CoareaTarget> targets;
  for (double L : Lambdas)
    for (const TestFunction& phi : sc.phi) targets.push_back({L, &phi});
  const std::vector<double> rhs = coarea_rhs_many(ctx, targets, sc.quadrature.plateau_depth);
  double res = 0.0;
  json rows = json::array();
  std::size_t q = 0;
  for (double L : Lambdas) {
    const PairingMeasure pm = ctx.external(ctx.constant(L));
    for (std::size_t p = 0; p < sc.phi.size(); ++p, ++q) {
      const double lhs = measure_pair(pm.measure, sc.phi[p], ctx.opt());
      res = std::max(res, std::abs(lhs - rhs[q]));
      rows.push_back(json{{"Lambda", L}, {"phi", sc.phi_specs[p].name}, {"lhs", lhs}, {"rhs", rhs[q]}});
    }
  }
  j.out.details["values"] = rows;
  j.add("external", res, tol);
}

void check_coarea_negative(Job& j) {
  const PairingContext& ctx = j.ctx;
  if (!j.has("expected_gap")) {
    j.out.applicable = false;
    j.out.details["reason"] = "no expected_gap parameter";
    return;
  }
  const double tol = j.primary(1e-3);
  j.out.tolerance = tol;
  const double lambda = j.num("lambda", 0.5);
  const double Lambda = j.num("Lambda", lambda);
  const TestFunction& phi = j.phi("phi");
  const double rhs = coarea_rhs_many(ctx, {{Lambda, &phi}}, j.sc.quadrature.plateau_depth)[0];
  const double internal = measure_pair(ctx.internal(ctx.constant(lambda)).measure, phi, ctx.opt());
  const double gap = rhs - internal;
  const double expected = j.num("expected_gap", 0.0);
  j.out.details["phi"] = j.str("phi", j.sc.phi_specs.front().name);
  j.out.details["lambda"] = lambda;
  j.out.details["Lambda"] = Lambda;
  j.out.details["coarea"] = rhs;
  j.out.details["internal"] = internal;
  j.out.details["gap"] = gap;
  j.out.details["expected_gap"] = expected;
  j.add("gap", std::abs(gap - expected), tol);
}

void check_gauss_green(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  const double tol = j.primary(1e-8);
  j.out.tolerance = tol;
  std::vector<std::pair<std::string, FinitePerimeterSet>> sets;
  for (std::size_t i = 0; i < sc.sets.size(); ++i) sets.emplace_back(sc.set_specs[i].name, sc.sets[i]);
  const int n_random = static_cast<int>(j.num("random_sets", 10));
  for (int r = 0; r < n_random; ++r) {
    const Interval i = random_interval(j.rng, sc.lo, sc.hi);
    sets.emplace_back("random" + std::to_string(r), FinitePerimeterSet({{i.lo, i.hi}}));
  }
  std::vector<double> params{0.0, 0.5, 1.0};
  for (const auto& [name, spec] : sc.selections)
    if (spec.kind == SelectionKind::Const) params.push_back(spec.value);
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  static const char* names[4] = {"open_external", "closed_external", "open_internal", "closed_internal"};
  double res[4] = {0, 0, 0, 0};
  json rows = json::array();
  for (const auto& [name, e] : sets) {
    for (double p : params) {
      const GaussGreen gg = gauss_green_terms(ctx, e, p);
      json row{{"set", name}, {"param", p}};
      json iv = json::array();
      for (const auto& [a, b] : e.intervals()) iv.push_back(json::array({a, b}));
      row["intervals"] = iv;
      for (int k = 0; k < 4; ++k) {
        res[k] = std::max(res[k], std::abs(gg.lhs[k] - gg.rhs[k]));
        row[names[k]] = json::array({gg.lhs[k], gg.rhs[k]});
      }
      rows.push_back(row);
    }
  }
  j.out.details["values"] = rows;
  j.out.details["random_intervals"] = n_random;
  for (int k = 0; k < 4; ++k) j.add(names[k], res[k], tol);
}

struct LadderValues {
  std::vector<int> ns;
  std::vector<double> values;
};

LadderValues ladder_pair(const PairingContext& ctx, const Selection& sel, const TestFunction& phi) {
  LadderValues lv;
  lv.ns = cl_ladder(ctx.u());
  for (int n : lv.ns) {
    const ClApprox a = gen_cl_sequence(ctx.u(), sel, n);
    lv.values.push_back(cl_pair(ctx.field(), a, phi, ctx.opt()));
  }
  return lv;
}

void check_lsc_L(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  if (!cl_applicable(sc, j)) return;
  const double tol = j.primary(1e-6);
  j.out.tolerance = tol;
  const PairingMeasure L = ctx.L().pm;
  double worst = 0.0, defect = 0.0;
  json rows = json::array();
  for (std::size_t p = 0; p < sc.phi.size(); ++p) {
    const TestFunction& phi = sc.phi[p];
    if (!positive_phi(phi)) continue;
    const double Lv = measure_pair(L.measure, phi, ctx.opt());
    for (double lam : lambda_grid()) {
      const LadderValues lv = ladder_pair(ctx, ctx.constant(lam), phi);
      const double lim = liminf_estimate(lv.values);
      worst = std::max(worst, Lv - lim);
      defect = std::max(defect, tail_defect(lv.values));
      rows.push_back(json{{"phi", sc.phi_specs[p].name},
                          {"lambda", lam},
                          {"L", Lv},
                          {"liminf", lim},
                          {"trailing_min", trailing_min(lv.values)}, {"seq", lv.values}});
    }
  }
  j.out.details["values"] = rows;
  j.add("liminf", std::max(0.0, worst), tol);
  j.add("tail", defect, 0.0);
}

void check_lsc_V(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  if (!cl_applicable(sc, j)) return;
  const double tol = j.primary(1e-5);
  j.out.tolerance = tol;
  const VResult V = ctx.V();
  // |V|(U) through the split G+ + H+: positive parts of V for b and for -b.
  const auto neg = std::make_shared<const Field>(ctx.field().negated());
  const PairingContext nctx(neg, ctx.u_ptr(), ctx.opt());
  const VResult Vn = nctx.V();
  const JordanParts jp = measure_tv(V.pm.measure);
  const JordanParts jn = measure_tv(Vn.pm.measure);
  double worst = 0.0, split = 0.0, defect = 0.0;
  json rows = json::array();
  for (std::size_t p = 0; p < sc.phi.size(); ++p) {
    const TestFunction& phi = sc.phi[p];
    const Interval U = Interval::open(phi.support_lo(), phi.support_hi());
    const double tv = measure_eval(jp.tv, U, ctx.opt());
    const double gh = measure_eval(jp.pos, U, ctx.opt()) + measure_eval(jn.pos, U, ctx.opt());
    split = std::max(split, std::abs(tv - gh));
    for (double lam : lambda_grid()) {
      std::vector<double> vals;
      for (int n : cl_ladder(*sc.u)) {
        const ClApprox a = gen_cl_sequence(*sc.u, ctx.constant(lam), n);
        vals.push_back(cl_abs(ctx.field(), a, U.lo, U.hi, ctx.opt()));
      }
      const double lim = liminf_estimate(vals);
      worst = std::max(worst, gh - lim);
      defect = std::max(defect, tail_defect(vals));
      rows.push_back(json{{"U", json::array({U.lo, U.hi})},
                          {"lambda", lam},
                          {"V_tv", gh},
                          {"liminf", lim},
                          {"trailing_min", trailing_min(vals)}});
    }
  }
  j.out.details["values"] = rows;
  j.add("liminf", std::max(0.0, worst), tol);
  j.add("split", split, j.secondary("split", 1e-10));
  j.add("tail", defect, 0.0);
}

// lambda in Lambda_M: F(u^lambda) attains the fiber maximum at every sigma atom.
double lambda_M_defect(const PairingContext& ctx, const Selection& sel) {
  const LResult L = ctx.L();
  double d = 0.0;
  const auto& jumps = ctx.u().jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& jp = jumps[i];
    if (ctx.sigma().sigma_atom(jp.x) == 0.0) continue;
    const double l = sel.lambda[i];
    const double Fl = ctx.sigma().F(Locator{Locator::Kind::Atom, jp.x, 0}, (1.0 - l) * jp.u_minus + l * jp.u_plus);
    d = std::max(d, std::abs(L.F_hat[i] - Fl));
  }
  return d;
}

void check_lsc_converse(Job& j) {
  const PairingContext& ctx = j.ctx;
  if (!j.has("expected_gap")) {
    j.out.applicable = false;
    j.out.details["reason"] = "no expected_gap parameter";
    return;
  }
  if (!cl_applicable(j.sc, j)) return;
  const double tol = j.primary(1e-3);
  j.out.tolerance = tol;
  const double lambda = j.num("lambda", 0.0);
  const TestFunction& phi = j.phi("phi");
  const Selection sel = ctx.constant(lambda);
  const double value = measure_pair(ctx.internal(sel).measure, phi, ctx.opt());
  const LResult L = ctx.L();
  const LadderValues lv = ladder_pair(ctx, L.witness, phi);
  const double lim = liminf_estimate(lv.values);
  const double gap = value - lim;
  j.out.details["trailing_min"] = trailing_min(lv.values);
  const double expected = j.num("expected_gap", 0.0);
  j.out.details["phi"] = j.str("phi", j.sc.phi_specs.front().name);
  j.out.details["lambda"] = lambda;
  j.out.details["value"] = value;
  j.out.details["liminf"] = lim;
  j.out.details["gap"] = gap;
  j.out.details["expected_gap"] = expected;
  j.out.details["witness"] = L.witness.lambda;
  j.out.details["lambda_M_defect"] = lambda_M_defect(ctx, sel);
  j.add("gap", std::abs(gap - expected), tol);
}

void check_recovery(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  if (!cl_applicable(sc, j)) return;
  if (sc.u->jumps().empty()) {
    j.out.applicable = false;
    j.out.details["reason"] = "u has no jumps; every recovery sequence is constant";
    return;
  }
  const double tol = j.primary(1e-3);
  j.out.tolerance = tol;
  const double lambda = j.num("lambda", 0.25);
  const double Lambda = j.num("Lambda", 0.5);
  const TestFunction& phi = sc.phi.size() > 1 && !j.has("phi") ? sc.phi[1] : j.phi("phi");
  const Selection sel = ctx.constant(lambda);
  const double target = measure_pair(ctx.internal(sel).measure, phi, ctx.opt());
  const LadderValues lv = ladder_pair(ctx, sel, phi);
  Table t;
  t.name = "recovery";
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < lv.ns.size(); ++i) {
    const double err = std::abs(lv.values[i] - target);
    t.rows.push_back({static_cast<double>(lv.ns[i]), lv.values[i], err});
    if (i >= lv.ns.size() / 2 && err > 1e-14) {
      lx.push_back(std::log(static_cast<double>(lv.ns[i])));
      ly.push_back(std::log(err));
    }
  }
  j.out.tables.push_back(t);
  // On u_n every variant is the same measure: check one Lambda pairing of the
  // last u_n through the definition route.
  const ClApprox last = gen_cl_sequence(*sc.u, sel, lv.ns.back());
  const auto un = std::make_shared<const BVFunction>(last.un);
  const PairingContext nctx(ctx.field_ptr(), un, ctx.opt());
  const double ext = measure_pair(nctx.external(nctx.constant(Lambda)).measure, phi, ctx.opt());
  const double err_last = t.rows.back().abs_error;
  double rate = std::numeric_limits<double>::quiet_NaN();
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rate = -sxy / sxx;
  }
  j.out.details["phi"] = j.str("phi", j.sc.phi_specs.front().name);
  j.out.details["lambda"] = lambda;
  j.out.details["Lambda"] = Lambda;
  j.out.details["target"] = target;
  j.out.details["rate"] = std::isnan(rate) ? json(nullptr) : json(rate);
  j.out.details["external_on_last"] = ext;
  j.add("error", err_last, tol);
  // Errors at round-off level carry no rate information.
  j.add("rate", std::isnan(rate) ? 0.0 : std::max(0.0, j.num("min_rate", 0.9) - rate), 0.0);
  j.add("variants_on_un", std::abs(ext - lv.values.back()), j.secondary("variants_on_un", 1e-8));
}

void check_relaxation(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  if (!cl_applicable(sc, j)) return;
  const double tol = j.primary(1e-4);
  j.out.tolerance = tol;
  const LResult L = ctx.L();
  std::vector<Selection> grid;
  for (double lam : lambda_grid()) grid.push_back(ctx.constant(lam));
  grid.push_back(L.witness);
  double lower = 0.0, attain = 0.0, member = 0.0;
  json rows = json::array();
  for (std::size_t p = 0; p < sc.phi.size(); ++p) {
    const TestFunction& phi = sc.phi[p];
    if (!positive_phi(phi)) continue;
    const double Lv = measure_pair(L.pm.measure, phi, ctx.opt());
    double best = kInf;
    std::size_t best_i = 0;
    json lims = json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const LadderValues lv = ladder_pair(ctx, grid[g], phi);
      const double lim = liminf_estimate(lv.values);
      lower = std::max(lower, Lv - lim);
      if (lim < best - 1e-12) {
        best = lim;
        best_i = g;
      }
      lims.push_back(lim);
    }
    attain = std::max(attain, std::abs(best - Lv));
    member = std::max(member, lambda_M_defect(ctx, grid[best_i]));
    rows.push_back(json{{"phi", sc.phi_specs[p].name},
                        {"L", Lv},
                        {"limits", lims},
                        {"minimum", best},
                        {"witness", grid[best_i].lambda}});
  }
  j.out.details["grid"] = "lambda = k/10, k = 0..10, followed by the maxF witness";
  j.out.details["values"] = rows;
  j.add("lower_bound", std::max(0.0, lower), tol);
  j.add("attainment", attain, tol);
  j.add("witness_in_Lambda_M", member, j.secondary("witness_in_Lambda_M", 1e-9));
}

void check_slicing(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  const double tol = j.primary(1e-8);
  j.out.tolerance = tol;
  const BVFunction& u = *sc.u;
  const PairingMeasure pm = ctx.internal(ctx.constant(0.5));
  double ac_res = 0.0;
  int ac_count = 0;
  json rows = json::array();
  const std::vector<double> br = ctx.composite().breaks();
  for (const MonotonePiece& mp : u.monotone_pieces()) {
    if (mp.ac_sign == 0 || mp.dir == 0) continue;
    for (int s = 0; s < 4; ++s) {
      const double x = j.rng.uniform(mp.a + 0.05 * (mp.b - mp.a), mp.b - 0.05 * (mp.b - mp.a));
      bool near = false;
      for (double b : br) near = near || std::abs(b - x) < 1e-6;
      const double du = u.ac_density(x);
      if (near || std::abs(du) < 1e-6) continue;
      const double t = u.value(x);
      const LevelSet ls = bv_level_set(u, t);
      int nu = 0;
      for (const auto& bp : ls.set.reduced_boundary(u.lo(), u.hi()))
        if (std::abs(bp.x - x) <= 1e-9) nu = bp.nu;
      const double lhs = pm.measure.ac_density(x) / std::abs(du);
      const double rhs = nu * 0.5 * (ctx.field().b(x, Side::Left, t) + ctx.field().b(x, Side::Right, t));
      ac_res = std::max(ac_res, nu == 0 ? kInf : std::abs(lhs - rhs));
      ++ac_count;
      rows.push_back(json{{"x", x}, {"t", t}, {"nu", nu}, {"pairing", lhs}, {"slice", rhs}});
    }
  }
  const DensityReport dr = ctx.densities(pm);
  double c_res = 0.0;
  json crows = json::array();
  for (const CantorSample& cs : dr.cantor) {
    c_res = std::max(c_res, cs.on_boundary ? cs.residual : kInf);
    crows.push_back(json{{"x", cs.x},
                         {"t", cs.t},
                         {"prediction", cs.prediction},
                         {"measured", cs.measured},
                         {"on_boundary", cs.on_boundary}});
  }
  // Jump probe: atom density versus the slice density at intermediate levels.
  json probe = json::array();
  for (std::size_t i = 0; i < u.jumps().size(); ++i) {
    const JumpPoint& jp = u.jumps()[i];
    const double t = 0.5 * (jp.u_minus + jp.u_plus);
    const TraceBundle tb = ctx.traces(jp);
    const double slice = tb.tr_star_b(t);
    probe.push_back(json{{"x", jp.x},
                         {"t", t},
                         {"theta_pairing", dr.jumps[i].theta},
                         {"theta_slice", slice},
                         {"differs", std::abs(dr.jumps[i].theta - slice) > 1e-9}});
  }
  j.out.details["ac_samples"] = rows;
  j.out.details["cantor_samples"] = crows;
  j.out.details["jump_probe"] = probe;
  if (ac_count == 0 && dr.cantor.empty()) {
    j.out.applicable = false;
    j.out.details["reason"] = "u has no diffuse part; only the jump probe is reported";
    return;
  }
  if (ac_count) j.add("ac", ac_res, tol);
  if (!dr.cantor.empty()) j.add("cantor", c_res, j.secondary("cantor", 1e-4));
}

void check_misc(Job& j) {
  const Scenario& sc = j.sc;
  const PairingContext& ctx = j.ctx;
  const Field& f = ctx.field();
  const BVFunction& u = *sc.u;
  const SigmaSystem& sys = ctx.sigma();
  const QuadOptions& opt = ctx.opt();
  const double T = f.T();
  Rng& rng = j.rng;
  j.out.tolerance = j.primary(1e-10);

  std::vector<double> xs;
  for (double x : f.jump_points()) xs.push_back(x);
  for (const JumpPoint& jp : u.jumps()) xs.push_back(jp.x);
  for (int k = 0; k < 8; ++k) xs.push_back(rng.uniform(sc.lo, sc.hi));

  // Lipschitz bound of the primitive's traces in t.
  {
    double r = 0.0;
    for (double x : xs)
      for (int k = 0; k < 16; ++k) {
        const double t = rng.uniform(-T, T), s = rng.uniform(-T, T);
        for (Side side : {Side::Left, Side::Right})
          r = std::max(r, std::abs(f.B(x, side, t) - f.B(x, side, s)) - f.b_sup() * std::abs(t - s));
      }
    j.add("lipschitz_traces", std::max(0.0, r), j.secondary("lipschitz_traces", 1e-12));
  }
  // Traces of the composite equal the primitive's traces at u's one-sided values.
  {
    double r = 0.0;
    for (double x : f.jump_points()) {
      for (int nu : {1, -1}) {
        const TraceBundle tb = field_traces(f, x, nu);
        const double ui = u.eval(x, tb.inner()), ue = u.eval(x, tb.outer());
        r = std::max(r, std::abs(nu * ctx.composite().v(x, tb.inner()) - tb.beta_i(ui)));
        r = std::max(r, std::abs(nu * ctx.composite().v(x, tb.outer()) - tb.beta_e(ue)));
      }
    }
    for (const JumpPoint& jp : u.jumps()) {
      const TraceBundle tb = ctx.traces(jp);
      r = std::max(r, std::abs(jp.nu * ctx.composite().v(jp.x, tb.inner()) - tb.beta_i(jp.u_i)));
      r = std::max(r, std::abs(jp.nu * ctx.composite().v(jp.x, tb.outer()) - tb.beta_e(jp.u_e)));
    }
    j.add("composite_traces", r, j.secondary("composite_traces", 1e-12));
  }
  // One-sided limits of chi_{u>t} at x versus chi_{u^+-(x) > t}.
  try {
    int bad = 0;
    std::vector<double> pts;
    for (const JumpPoint& jp : u.jumps()) pts.push_back(jp.x);
    for (int k = 0; k < 6; ++k) pts.push_back(rng.uniform(sc.lo, sc.hi));
    for (double y : pts) {
      const auto [ul, ur] = u.eval_sided(y);
      const double um = std::min(ul, ur), up = std::max(ul, ur);
      for (int k = 0; k < 12; ++k) {
        const double t = rng.uniform(um - 0.5, up + 0.5);
        if (std::abs(t - um) < 1e-6 || std::abs(t - up) < 1e-6) continue;
        const LevelSet ls = bv_level_set(u, t);
        bool left = false, right = false;
        for (const auto& [a, b] : ls.set.intervals()) {
          left = left || (a < y && y <= b);
          right = right || (a <= y && y < b);
        }
        const bool cp = left || right, cm = left && right;
        if (cp != (up > t) || cm != (um > t)) ++bad;
      }
    }
    j.add("level_set_traces", bad, 0.0);
  } catch (const Error& e) {
    j.out.details["level_set_traces_error"] = e.what();
  }
  // |pairing|(E) <= ||b|| |Du|(E) on random intervals, every variant.
  {
    double r = 0.0;
    const auto pms = all_variants(ctx, 0.5);
    std::vector<JordanParts> tvs;
    for (const PairingMeasure& pm : pms) tvs.push_back(measure_tv(pm.measure));
    const int n = static_cast<int>(j.num("tv_intervals", 100));
    std::vector<Interval> ivs;
    for (int k = 0; k < n; ++k) ivs.push_back(random_interval(rng, sc.lo, sc.hi));
    for (const JumpPoint& jp : u.jumps()) ivs.push_back(Interval::point(jp.x));
    for (const Interval& i : ivs) {
      const double bound = f.b_sup() * u.total_variation(i);
      for (const JordanParts& jp : tvs) r = std::max(r, measure_eval(jp.tv, i, opt) - bound);
    }
    j.add("tv_bound", std::max(0.0, r), j.secondary("tv_bound", 1e-10));
  }
  // Locators of the dominating system used by the F checks below.
  std::vector<Locator> locs;
  for (const SigmaSystem::AtomPart& a : sys.atoms()) locs.push_back({Locator::Kind::Atom, a.x, 0});
  for (std::size_t i = 0; i < sys.cantor_groups().size(); ++i)
    locs.push_back({Locator::Kind::Cantor, 0.0, static_cast<int>(i)});
  for (int k = 0; k < 6; ++k) {
    const double x = rng.uniform(sc.lo, sc.hi);
    if (sys.m_ac(x) > 0.0) locs.push_back({Locator::Kind::Ac, x, 0});
  }
  // |f| <= 1, F(., 0) = 0 and F 1-Lipschitz in t.
  {
    double r = 0.0;
    for (const Locator& loc : locs) {
      r = std::max(r, std::abs(sys.F(loc, 0.0)));
      for (int k = 0; k < 32; ++k) {
        const double t = rng.uniform(-T, T), s = rng.uniform(-T, T);
        r = std::max(r, std::abs(sys.f(loc, t)) - 1.0);
        r = std::max(r, std::abs(sys.F(loc, t) - sys.F(loc, s)) - std::abs(t - s));
      }
    }
    j.add("f_bounds", std::max(0.0, r), j.secondary("f_bounds", 1e-12));
  }
  // Fiber maximum: monotone in both endpoints and 1-Lipschitz in each.
  {
    double r = 0.0;
    for (const Locator& loc : locs) {
      const auto Fh = [&](double a, double b) {
        return maximize([&](double t) { return sys.F(loc, t); }, a, b, 1.0).value;
      };
      for (int k = 0; k < 6; ++k) {
        double a = rng.uniform(-T + 0.3, T - 0.3), b = rng.uniform(-T + 0.3, T - 0.3);
        if (a > b) std::swap(a, b);
        const double da = rng.uniform(0.0, 0.3), db = rng.uniform(0.0, 0.3);
        const double base = Fh(a, b), wa = Fh(a - da, b), wb = Fh(a, b + db);
        r = std::max({r, base - wa, base - wb, std::abs(wa - base) - da, std::abs(wb - base) - db});
      }
    }
    j.add("fhat_structure", std::max(0.0, r), j.secondary("fhat_structure", 1e-9));
  }
  // Atoms of the dominating system: f sigma({x}) and F sigma({x}) equal the
  // trace differences of b_t and B_t.
  {
    double r = 0.0;
    for (const SigmaSystem::AtomPart& a : sys.atoms()) {
      const Locator loc{Locator::Kind::Atom, a.x, 0};
      const double sig = a.s * a.m;
      const TraceBundle tb = field_traces(f, a.x, 1);
      for (int k = 0; k < 16; ++k) {
        const double t = rng.uniform(-T, T);
        r = std::max(r, std::abs(sys.f(loc, t) * sig - (tb.gamma_i(t) - tb.gamma_e(t))));
        r = std::max(r, std::abs(sys.F(loc, t) * sig - (tb.beta_i(t) - tb.beta_e(t))));
      }
    }
    j.add("sigma_atoms", r, j.secondary("sigma_atoms", 1e-12));
  }
  // sigma dominates |Div_x b_t| on random intervals at 64 levels t.
  {
    std::vector<BorelSet> samples;
    for (int k = 0; k < 24; ++k) samples.push_back(BorelSet::of(random_interval(rng, sc.lo, sc.hi)));
    for (double x : f.jump_points()) samples.push_back(BorelSet::of(Interval::point(x)));
    const Measure sig = sys.sigma();
    int bad = 0;
    for (int k = 0; k < 64; ++k) {
      const double t = -T + 2.0 * T * (k + 0.5) / 64.0;
      if (!measure_dominates(sig, measure_tv(f.div_bt(t)).tv, samples, 1e-10, opt)) ++bad;
    }
    j.add("sigma_dominates", bad, 0.0);
  }
  // Pairing invariants.
  {
    const std::vector<double> grid = lambda_grid();
    std::vector<PairingMeasure> internals;
    for (double l : grid) internals.push_back(ctx.internal(ctx.constant(l)));
    const LResult L = ctx.L();
    const VResult V = ctx.V();
    // Variants agree away from J_u.
    double agree = 0.0;
    const auto pms = all_variants(ctx, 0.5);
    for (int k = 0; k < 40; ++k) {
      const Interval i = random_interval(rng, sc.lo, sc.hi);
      bool hits = false;
      for (const JumpPoint& jp : u.jumps()) hits = hits || i.contains(jp.x);
      if (hits) continue;
      const double ref = measure_eval(pms[0].measure, i, opt);
      for (const PairingMeasure& pm : pms) agree = std::max(agree, std::abs(measure_eval(pm.measure, i, opt) - ref));
    }
    j.add("variants_off_jumps", agree, j.secondary("variants_off_jumps", 1e-10));
    // L below every internal pairing on nonnegative phi.
    double lmin = 0.0;
    for (const TestFunction& phi : sc.phi) {
      if (!positive_phi(phi)) continue;
      const double Lv = measure_pair(L.pm.measure, phi, opt);
      for (const PairingMeasure& pm : internals) lmin = std::max(lmin, Lv - measure_pair(pm.measure, phi, opt));
    }
    j.add("L_minimal", lmin, j.secondary("L_minimal", 1e-9));
    // |V| setwise below every |internal|.
    double vmin = 0.0;
    const JordanParts vtv = measure_tv(V.pm.measure);
    std::vector<JordanParts> itv;
    for (const PairingMeasure& pm : internals) itv.push_back(measure_tv(pm.measure));
    std::vector<Interval> ivs;
    for (int k = 0; k < 30; ++k) ivs.push_back(random_interval(rng, sc.lo, sc.hi));
    for (const JumpPoint& jp : u.jumps()) ivs.push_back(Interval::point(jp.x));
    for (const Interval& i : ivs) {
      const double v = measure_eval(vtv.tv, i, opt);
      for (const JordanParts& p : itv) vmin = std::max(vmin, v - measure_eval(p.tv, i, opt));
    }
    j.add("V_minimal", vmin, j.secondary("V_minimal", 1e-9));
    // Jump atoms: trace formula, quadrature of the traces, L = min zeta.
    double atom = 0.0, quad = 0.0, lz = 0.0;
    for (std::size_t i = 0; i < u.jumps().size(); ++i) {
      const JumpPoint& jp = u.jumps()[i];
      const TraceBundle tb = ctx.traces(jp);
      const auto zeta = [&](double t) {
        return tb.beta_e(t) - tb.beta_e(jp.u_minus) + tb.beta_i(jp.u_plus) - tb.beta_i(t);
      };
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double t = (1.0 - grid[g]) * jp.u_minus + grid[g] * jp.u_plus;
        atom = std::max(atom, std::abs(internals[g].jump_atoms[i].value - zeta(t)));
        quad = std::max(quad, std::abs(ctx.zeta_quadrature(jp, t) - zeta(t)));
      }
      const double zmin =
          -maximize([&](double t) { return -zeta(t); }, jp.u_minus, jp.u_plus, 2.0 * f.b_sup()).value;
      lz = std::max(lz, std::abs(L.pm.jump_atoms[i].value - zmin));
    }
    j.add("jump_atom_traces", atom, j.secondary("jump_atom_traces", 1e-12));
    j.add("jump_atom_quadrature", quad, j.secondary("jump_atom_quadrature", 1e-10));
    j.add("L_min_zeta", lz, j.secondary("L_min_zeta", 1e-9));
  }
  // Matching external and internal selections.
  {
    double fwd = 0.0;
    for (double Lam : {0.0, 0.5, 1.0}) {
      const Selection S = ctx.constant(Lam);
      const MatchResult m = ctx.match_external(S);
      for (double r : m.residual) fwd = std::max(fwd, r);
      const PairingMeasure in = ctx.internal(m.lambda);
      const PairingMeasure ex = ctx.external(S);
      for (std::size_t i = 0; i < in.jump_atoms.size(); ++i)
        fwd = std::max(fwd, std::abs(in.jump_atoms[i].value - ex.jump_atoms[i].value));
    }
    j.add("legame_forward", fwd, j.secondary("legame_forward", 1e-10));
    bool monotone = true;
    for (const JumpPoint& jp : u.jumps()) {
      if (!sys.atom_at(jp.x)) continue;
      const Locator loc{Locator::Kind::Atom, jp.x, 0};
      bool up = true, down = true;
      double prev = sys.F(loc, jp.u_minus);
      for (int k = 1; k <= 256; ++k) {
        const double cur = sys.F(loc, jp.u_minus + (jp.u_plus - jp.u_minus) * k / 256.0);
        up = up && cur >= prev - 1e-14;
        down = down && cur <= prev + 1e-14;
        prev = cur;
      }
      monotone = monotone && (up || down);
    }
    double rev = 0.0;
    for (double l : lambda_grid())
      for (double R : ctx.match_reverse(ctx.constant(l)).R) rev = std::max(rev, std::abs(R));
    j.out.details["F_monotone_on_jumps"] = monotone;
    j.out.details["legame_reverse_max_R"] = rev;
    if (monotone) j.add("legame_reverse", rev, j.secondary("legame_reverse", 1e-10));
  }
  // Linear fields |A . Du|: V atom equals min(|A+|, |A-|) (u+ - u-).
  if (f.terms().size() == 1 && !f.autonomous()) {
    const TensorTerm& k = f.terms()[0];
    bool unit = true;
    for (int q = -8; q <= 8; ++q) unit = unit && eval(k.g, q * T / 8.0) == 1.0;
    bool same_sign = true;
    for (const JumpPoint& jp : u.jumps()) {
      const auto [al, ar] = k.A->eval_sided(jp.x);
      same_sign = same_sign && al * ar > 0.0;
    }
    if (unit && same_sign && !u.jumps().empty()) {
      const VResult V = ctx.V();
      double r = 0.0;
      json rows = json::array();
      for (std::size_t i = 0; i < u.jumps().size(); ++i) {
        const JumpPoint& jp = u.jumps()[i];
        const auto [al, ar] = k.A->eval_sided(jp.x);
        const double fminus = std::min(std::abs(al), std::abs(ar)) * (jp.u_plus - jp.u_minus);
        const double vatom = V.theta_V[i] * (jp.u_plus - jp.u_minus);
        r = std::max(r, std::abs(vatom - fminus));
        rows.push_back(json{{"x", jp.x}, {"f_minus", fminus}, {"V_atom", vatom}});
      }
      j.out.details["f_minus"] = rows;
      j.add("f_minus", r, j.secondary("f_minus", 1e-10));
    }
  }
  // Separated fields: diffuse part of the pairing equals g(u~) times the
  // diffuse part of the linear pairing (A, Du).
  if (f.kind() == FieldKind::Separated) {
    const TensorTerm& k = f.terms()[0];
    const PairingMeasure pm = ctx.internal(ctx.constant(0.5));
    double r = 0.0;
    for (const TestFunction& phi : sc.phi) {
      double diffuse = measure_pair(pm.measure, phi, opt);
      for (const auto& [x, w] : pm.measure.atoms()) diffuse -= phi(x) * w;
      double lin = 0.0;
      if (u.has_ac()) {
        std::vector<double> br = ctx.composite().breaks();
        br.insert(br.end(), phi.breaks().begin(), phi.breaks().end());
        lin += integrate(
            [&](double x) {
              const double du = u.ac_density(x);
              return du == 0.0 ? 0.0 : phi(x) * eval(k.g, u.value(x)) * k.A->value(x) * du;
            },
            phi.support_lo(), phi.support_hi(), br, ctx.composite().cantor_supports(), opt);
      }
      for (const CantorComponent& c : u.cantor())
        lin += c.weight * integrate_cantor(
                              [&](double x) {
                                const double astar = 0.5 * (k.A->eval(x, Side::Left) + k.A->eval(x, Side::Right));
                                return phi(x) * eval(k.g, u.value(x)) * astar;
                              },
                              CantorComponent{1.0, c.lo, c.hi}, phi.support_lo(), phi.support_hi(), opt);
      r = std::max(r, std::abs(diffuse - lin));
    }
    j.add("leibniz", r, j.secondary("leibniz", 1e-8));
  }
}

using CheckFn = void (*)(Job&);

CheckFn lookup(const std::string& name) {
  static const std::map<std::string, CheckFn> table{
      {"coarea", check_coarea},           {"coarea_negative", check_coarea_negative},
      {"gauss_green", check_gauss_green}, {"lsc_L", check_lsc_L},
      {"lsc_V", check_lsc_V},             {"lsc_converse", check_lsc_converse},
      {"misc", check_misc},               {"recovery", check_recovery},
      {"relaxation", check_relaxation},   {"representation", check_representation},
      {"slicing", check_slicing}};
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
  return it->second;
}

}  // namespace

GaussGreen gauss_green_terms(const PairingContext& ctx, const FinitePerimeterSet& e, double param) {
  const Field& f = ctx.field();
  const BVFunction& u = ctx.u();
  std::vector<Interval> open, closed;
  for (const auto& [a, b] : e.intervals()) {
    open.push_back(Interval::open(a, b));
    closed.push_back(Interval::closed(a, b));
  }
  const BorelSet So(open), Sc(closed);
  const Selection sel = ctx.constant(param);
  const PairingMeasure ext = ctx.external(sel);
  const PairingMeasure in = ctx.internal(sel);
  const Measure dext = ctx.density_measure(ext);
  const Measure din = ctx.density_measure(in);
  GaussGreen g{};
  g.lhs[0] = measure_eval(dext, So, ctx.opt()) + sigma_term(ctx, So, true, param);
  g.lhs[1] = measure_eval(dext, Sc, ctx.opt()) + sigma_term(ctx, Sc, true, param);
  g.lhs[2] = measure_eval(din, So, ctx.opt()) + sigma_term(ctx, So, false, param);
  g.lhs[3] = measure_eval(din, Sc, ctx.opt()) + sigma_term(ctx, Sc, false, param);
  double ri = 0.0, re = 0.0;
  for (const auto& bp : e.reduced_boundary(u.lo(), u.hi())) {
    const TraceBundle tb = field_traces(f, bp.x, bp.nu);
    ri -= tb.beta_i(u.eval(bp.x, tb.inner()));
    re -= tb.beta_e(u.eval(bp.x, tb.outer()));
  }
  g.rhs[0] = g.rhs[2] = ri;
  g.rhs[1] = g.rhs[3] = re;
  return g;
}

double coarea_rhs(const PairingContext& ctx, double Lambda, const TestFunction& phi, int plateau_depth) {
  return coarea_rhs_many(ctx, {{Lambda, &phi}}, plateau_depth)[0];
}

CheckResult run_check(const Scenario& sc, const std::string& name, const RunOptions& opt) {
  CheckResult out;
  out.name = name;
  const CheckFn fn = lookup(name);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = opt.seed ? *opt.seed : sc.seed;
  Job job{sc, *sc.ctx, sc.check(name), opt.tol_scale, Rng(check_seed(seed, name)), out};
  try {
    fn(job);
  } catch (const Error& e) {
    out.pass = false;
    out.details["error"] = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    out.pass = false;
    out.details["error"] = e.what();
  }
  if (!out.applicable) {
    out.pass = true;
    out.residuals.clear();
    out.tolerances.clear();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<CheckResult> run_checks(const Scenario& sc, const RunOptions& opt) {
  std::vector<std::string> names = opt.only;
  if (names.empty()) names = check_names();
  for (const std::string& n : names) lookup(n);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::vector<CheckResult> results(names.size());
  const int workers = std::max(1, std::min<int>(opt.jobs, static_cast<int>(names.size())));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) results[i] = run_check(sc, names[i], opt);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

}  // namespace bvpair
