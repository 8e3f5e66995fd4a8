#include "bvpair/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bvpair/error.hpp"

namespace bvpair {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Internal: return "internal";
    case Variant::External: return "external";
    case Variant::Standard: return "standard";
    case Variant::L: return "L";
    case Variant::V: return "V";
  }
  return "internal";
}

Variant variant_from_string(const std::string& s) {
  if (s == "internal") return Variant::Internal;
  if (s == "external") return Variant::External;
  if (s == "standard") return Variant::Standard;
  if (s == "L") return Variant::L;
  if (s == "V") return Variant::V;
  throw Error(ErrorCode::InvalidArgument, "unknown pairing variant '" + s + "'");
}

std::string describe(const SelectionSpec& s) {
  std::ostringstream os;
  switch (s.kind) {
    case SelectionKind::Const: os << "CONST(" << s.value << ")"; break;
    case SelectionKind::MaxF: os << "MAX_F"; break;
    case SelectionKind::MinZeta: os << "MIN_ZETA"; break;
    case SelectionKind::MatchExternal: os << "MATCH_EXTERNAL(" << s.value << ")"; break;
    case SelectionKind::Explicit: os << "EXPLICIT"; break;
  }
  return os.str();
}

double Selection::at(double point) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == point) return lambda[i];
  throw Error(ErrorCode::SelectionMismatch, "selection has no value at x = " + std::to_string(point));
}

PairingContext::PairingContext(std::shared_ptr<const Field> field, std::shared_ptr<const BVFunction> u,
                               QuadOptions opt, int leaf_depth)
    : field_(std::move(field)), u_(std::move(u)), opt_(opt) {
  if (u_->lo() != field_->lo() || u_->hi() != field_->hi())
    throw Error(ErrorCode::ValidationError, "u and the field must share the domain");
  sys_ = std::make_shared<SigmaSystem>(field_);
  comp_ = std::make_shared<Composite>(field_, u_, opt_, leaf_depth);
}

double PairingContext::g_dA(double x, double t) const {
  double s = 0.0;
  for (const TensorTerm& k : field_->terms())
    if (const JumpPoint* j = k.A->jump_at(x)) s += eval(k.G, t) * j->size();
  return s;
}

double PairingContext::g_dA_lipschitz(double x) const {
  double s = 0.0;
  for (const TensorTerm& k : field_->terms())
    if (const JumpPoint* j = k.A->jump_at(x)) s += k.g_sup * std::abs(j->size());
  return s;
}

double PairingContext::zeta(const JumpPoint& j, double t) const {
  const TraceBundle tb = traces(j);
  return tb.beta_e(t) - tb.beta_e(j.u_minus) + tb.beta_i(j.u_plus) - tb.beta_i(t);
}

double PairingContext::zeta_quadrature(const JumpPoint& j, double t) const {
  const TraceBundle tb = traces(j);
  QuadOptions q = opt_;
  q.abs_tol = 1e-14;
  const double e = integrate([&](double s) { return tb.gamma_e(s); }, j.u_minus, t, q);
  const double i = integrate([&](double s) { return tb.gamma_i(s); }, t, j.u_plus, q);
  return e + i;
}

double PairingContext::ac_density(double x) const {
  const double du = u_->ac_density(x);
  if (du == 0.0) return 0.0;
  return field_->b(x, Side::Right, u_->value(x)) * du;
}

// ---------------------------------------------------------------- selections

void PairingContext::check_selection(const Selection& s) const {
  const auto& jumps = u_->jumps();
  bool ok = s.x.size() == jumps.size() && s.lambda.size() == jumps.size();
  for (std::size_t i = 0; ok && i < jumps.size(); ++i) ok = s.x[i] == jumps[i].x;
  if (!ok) throw Error(ErrorCode::SelectionMismatch, "selection is not defined exactly on the jump set of u");
  for (double l : s.lambda)
    if (!(l >= 0.0 && l <= 1.0)) throw Error(ErrorCode::ValidationError, "selection values must lie in [0, 1]");
}

std::vector<std::pair<double, double>> PairingContext::max_points() const {
  std::vector<std::pair<double, double>> out;
  for (const JumpPoint& j : u_->jumps()) {
    const double x = j.x;
    const Argmax a = maximize([&](double t) { return g_dA(x, t); }, j.u_minus, j.u_plus, g_dA_lipschitz(x));
    out.emplace_back(a.t, a.value);
  }
  return out;
}

std::vector<double> PairingContext::min_zeta_points() const {
  std::vector<double> out;
  for (const JumpPoint& j : u_->jumps()) {
    const TraceBundle tb = traces(j);
    const double base = -tb.beta_e(j.u_minus) + tb.beta_i(j.u_plus);
    const Fn neg_abs = [&](double t) { return -std::abs(tb.beta_e(t) - tb.beta_i(t) + base); };
    const Argmax a = maximize(neg_abs, j.u_minus, j.u_plus, 2.0 * field_->b_sup());
    out.push_back(a.t);
  }
  return out;
}

namespace {

double param_of(const JumpPoint& j, double t) {
  return std::clamp((t - j.u_minus) / (j.u_plus - j.u_minus), 0.0, 1.0);
}

}  // namespace

Selection PairingContext::resolve(const SelectionSpec& spec) const {
  Selection s;
  s.provenance = spec;
  for (const JumpPoint& j : u_->jumps()) s.x.push_back(j.x);
  switch (spec.kind) {
    case SelectionKind::Const:
      s.lambda.assign(s.x.size(), spec.value);
      break;
    case SelectionKind::MaxF: {
      const auto pts = max_points();
      for (std::size_t i = 0; i < pts.size(); ++i) s.lambda.push_back(param_of(u_->jumps()[i], pts[i].first));
      break;
    }
    case SelectionKind::MinZeta: {
      const auto pts = min_zeta_points();
      for (std::size_t i = 0; i < pts.size(); ++i) s.lambda.push_back(param_of(u_->jumps()[i], pts[i]));
      break;
    }
    case SelectionKind::MatchExternal: {
      Selection Lambda = resolve(SelectionSpec::constant(spec.value));
      s.lambda = match_external(Lambda).lambda.lambda;
      break;
    }
    case SelectionKind::Explicit:
      if (spec.values.size() != s.x.size())
        throw Error(ErrorCode::SelectionMismatch, "explicit selection has " + std::to_string(spec.values.size()) +
                                                      " values but u has " + std::to_string(s.x.size()) + " jumps");
      s.lambda = spec.values;
      break;
  }
  check_selection(s);
  return s;
}

// ------------------------------------------------------------ definition

JumpAtom PairingContext::atom_from_t(const JumpPoint& j, double param, double t) const {
  JumpAtom a;
  a.x = j.x;
  a.u_minus = j.u_minus;
  a.u_plus = j.u_plus;
  a.nu = j.nu;
  a.param = param;
  a.t_star = t;
  a.sigma_term = g_dA(j.x, t);
  a.div_v = comp_->atom(j.x);
  a.value = a.div_v - a.sigma_term;
  return a;
}

PairingMeasure PairingContext::assemble(Variant v, const Selection& sel, const std::vector<JumpAtom>& atoms) const {
  PairingMeasure pm;
  pm.variant = v;
  pm.selection = sel;
  pm.jump_atoms = atoms;
  Measure m(field_->lo(), field_->hi());
  for (const JumpAtom& a : atoms) m.add_atom(a.x, a.value);
  // Jumps of the coefficients where u is continuous.
  for (double x : field_->jump_points()) {
    if (u_->jump_at(x)) continue;
    m.add_atom(x, comp_->atom(x) - g_dA(x, u_->value(x)));
  }
  auto field = field_;
  auto u = u_;
  auto comp = comp_;
  bool any_ac = u_->has_ac();
  for (const TensorTerm& k : field_->terms()) any_ac = any_ac || k.A->has_ac();
  if (any_ac) {
    double usup = 0.0;
    if (u_->spec().ac)
      for (std::size_t i = 0; i < u_->spec().ac->pieces().size(); ++i)
        usup = std::max(usup, u_->spec().ac->piece_deriv_sup(i));
    m.add_density(1.0, Density{[field, u, comp](double x) {
                                 double s = comp->ac_density(x);
                                 const double t = u->value(x);
                                 for (const TensorTerm& k : field->terms()) s -= eval(k.G, t) * k.A->ac_density(x);
                                 return s;
                               },
                               comp_->breaks(), comp_->cantor_supports(), field_->b_sup() * usup});
  }
  const auto& supports = comp_->cantor_supports();
  for (std::size_t i = 0; i < supports.size(); ++i) {
    std::vector<double> w(field_->terms().size(), 0.0);
    for (std::size_t k = 0; k < w.size(); ++k)
      for (const CantorComponent& c : field_->terms()[k].A->cantor())
        if (c.lo == supports[i].lo && c.hi == supports[i].hi) w[k] += c.weight;
    m.add_cantor(supports[i].lo, supports[i].hi, 1.0, [field, u, comp, w, i](double x) {
      double s = comp->cantor_density(i, x);
      const double t = u->value(x);
      for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) s -= w[k] * eval(field->terms()[k].G, t);
      return s;
    });
  }
  pm.measure = std::move(m);
  return pm;
}

PairingMeasure PairingContext::internal(const Selection& lambda) const {
  check_selection(lambda);
  std::vector<JumpAtom> atoms;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double l = lambda.lambda[i];
    atoms.push_back(atom_from_t(j, l, (1.0 - l) * j.u_minus + l * j.u_plus));
  }
  return assemble(Variant::Internal, lambda, atoms);
}

PairingMeasure PairingContext::external(const Selection& Lambda) const {
  check_selection(Lambda);
  std::vector<JumpAtom> atoms;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double L = Lambda.lambda[i];
    JumpAtom a = atom_from_t(j, L, (1.0 - L) * j.u_minus + L * j.u_plus);
    a.sigma_term = (1.0 - L) * g_dA(j.x, j.u_minus) + L * g_dA(j.x, j.u_plus);
    a.value = a.div_v - a.sigma_term;
    atoms.push_back(a);
  }
  return assemble(Variant::External, Lambda, atoms);
}

PairingMeasure PairingContext::standard() const {
  PairingMeasure pm = external(constant(0.5));
  pm.variant = Variant::Standard;
  return pm;
}

LResult PairingContext::L() const {
  LResult r;
  r.witness.provenance = SelectionSpec::max_f();
  const auto pts = max_points();
  std::vector<JumpAtom> atoms;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double p = param_of(j, pts[i].first);
    r.witness.x.push_back(j.x);
    r.witness.lambda.push_back(p);
    JumpAtom a = atom_from_t(j, p, pts[i].first);
    atoms.push_back(a);
    const double sig = sys_->sigma_atom(j.x);
    r.F_hat.push_back(sig > 0.0 ? pts[i].second / sig : 0.0);
  }
  r.pm = assemble(Variant::L, r.witness, atoms);
  return r;
}

VResult PairingContext::V() const {
  VResult r;
  r.lambda_V.provenance = SelectionSpec::min_zeta();
  const auto pts = min_zeta_points();
  std::vector<JumpAtom> atoms;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double p = param_of(j, pts[i]);
    r.lambda_V.x.push_back(j.x);
    r.lambda_V.lambda.push_back(p);
    JumpAtom a = atom_from_t(j, p, pts[i]);
    atoms.push_back(a);
    r.theta_V.push_back(std::abs(a.value) / (j.u_plus - j.u_minus));
  }
  r.pm = assemble(Variant::V, r.lambda_V, atoms);
  return r;
}

PairingMeasure PairingContext::pairing(Variant v, const Selection& sel) const {
  switch (v) {
    case Variant::Internal: return internal(sel);
    case Variant::External: return external(sel);
    case Variant::Standard: return standard();
    case Variant::L: return L().pm;
    case Variant::V: return V().pm;
  }
  return internal(sel);
}

// ----------------------------------------------------------------- matching

MatchResult PairingContext::match_external(const Selection& Lambda) const {
  check_selection(Lambda);
  MatchResult r;
  r.lambda.provenance = SelectionSpec::match(Lambda.lambda.empty() ? 0.5 : Lambda.lambda.front());
  r.lambda.x = Lambda.x;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double L = Lambda.lambda[i];
    if (!sys_->atom_at(j.x)) {
      r.lambda.lambda.push_back(L);
      r.residual.push_back(0.0);
      continue;
    }
    const Locator loc{Locator::Kind::Atom, j.x, 0};
    const double target = (1.0 - L) * sys_->F(loc, j.u_minus) + L * sys_->F(loc, j.u_plus);
    const auto phi = [&](double s) { return sys_->F(loc, j.u_minus + s * (j.u_plus - j.u_minus)) - target; };
    double root = -1.0;
    const int n = 4096;
    double prev = phi(0.0);
    if (std::abs(prev) <= 1e-15) root = 0.0;
    for (int k = 1; k <= n && root < 0.0; ++k) {
      const double s = static_cast<double>(k) / n;
      const double cur = phi(s);
      if (cur == 0.0) {
        root = s;
      } else if ((prev < 0.0) != (cur < 0.0)) {
        double a = static_cast<double>(k - 1) / n, b = s, fa = prev;
        for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = phi(m);
          if (fm == 0.0) {
            a = b = m;
            break;
          }
          if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        root = std::abs(phi(a)) <= std::abs(phi(b)) ? a : b;
      }
      prev = cur;
    }
    if (root < 0.0) {
      // Only tangential contact: take the smallest minimizer of |phi|.
      root = maximize([&](double s) { return -std::abs(phi(s)); }, 0.0, 1.0, 1.0 * (j.u_plus - j.u_minus)).t;
    }
    r.lambda.lambda.push_back(root);
    r.residual.push_back(std::abs(phi(root)));
  }
  return r;
}

ReverseMatch PairingContext::match_reverse(const Selection& lambda) const {
  check_selection(lambda);
  ReverseMatch r;
  r.Lambda.provenance = SelectionSpec::explicit_values(lambda.lambda);
  r.Lambda.x = lambda.x;
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const double l = lambda.lambda[i];
    if (!sys_->atom_at(j.x)) {
      r.Lambda.lambda.push_back(l);
      r.R.push_back(0.0);
      continue;
    }
    const Locator loc{Locator::Kind::Atom, j.x, 0};
    const double fm = sys_->F(loc, j.u_minus);
    const double fp = sys_->F(loc, j.u_plus);
    const double fl = sys_->F(loc, (1.0 - l) * j.u_minus + l * j.u_plus);
    const double den = fp - fm;
    const double L = den != 0.0 ? std::clamp((fl - fm) / den, 0.0, 1.0) : 0.0;
    r.Lambda.lambda.push_back(L);
    r.R.push_back(fl - ((1.0 - L) * fm + L * fp));
  }
  return r;
}

// ---------------------------------------------------------------- weak form

double PairingContext::F_bar(const PairingMeasure& pm, double x) const {
  const Locator loc{Locator::Kind::Atom, x, 0};
  const JumpPoint* j = u_->jump_at(x);
  if (!j) return sys_->F(loc, u_->value(x));
  switch (pm.variant) {
    case Variant::Internal:
    case Variant::V: {
      const double l = pm.selection.at(x);
      return sys_->F(loc, (1.0 - l) * j->u_minus + l * j->u_plus);
    }
    case Variant::External:
    case Variant::Standard: {
      const double L = pm.selection.at(x);
      return (1.0 - L) * sys_->F(loc, j->u_minus) + L * sys_->F(loc, j->u_plus);
    }
    case Variant::L:
      return maximize([&](double t) { return sys_->F(loc, t); }, j->u_minus, j->u_plus, 1.0).value;
  }
  return 0.0;
}

double PairingContext::weak_pair(const PairingMeasure& pm, const TestFunction& phi) const {
  const double a = phi.support_lo();
  const double b = phi.support_hi();
  double sig = 0.0;
  for (const SigmaSystem::AtomPart& p : sys_->atoms())
    if (p.x > a && p.x < b && p.s * p.m != 0.0) sig += phi(p.x) * p.s * p.m * F_bar(pm, p.x);
  const auto& groups = sys_->cantor_groups();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const SigmaSystem::CantorGroup& g = groups[i];
    if (g.s * g.m == 0.0) continue;
    const Locator loc{Locator::Kind::Cantor, 0.0, static_cast<int>(i)};
    const CantorComponent k{1.0, g.lo, g.hi};
    sig += g.s * g.m *
           integrate_cantor([&](double x) { return phi(x) * sys_->F(loc, u_->value(x)); }, k, a, b, opt_);
  }
  bool any_ac = false;
  for (const TensorTerm& k : field_->terms()) any_ac = any_ac || k.A->has_ac();
  if (any_ac) {
    std::vector<double> br = comp_->breaks();
    br.insert(br.end(), phi.breaks().begin(), phi.breaks().end());
    sig += integrate(
        [&](double x) {
          const double m = sys_->m_ac(x);
          if (m == 0.0) return 0.0;
          const Locator loc{Locator::Kind::Ac, x, 0};
          return phi(x) * sys_->s_ac(x) * m * sys_->F(loc, u_->value(x));
        },
        a, b, br, comp_->cantor_supports(), opt_);
  }
  return comp_->weak_div(phi) - sig;
}

// ---------------------------------------------------------------- densities

Measure PairingContext::density_measure(const PairingMeasure& pm) const {
  Measure m(field_->lo(), field_->hi());
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const JumpAtom& a = pm.jump_atoms[i];
    double value = 0.0;
    if (pm.variant == Variant::External || pm.variant == Variant::Standard) {
      const TraceBundle tb = traces(j);
      QuadOptions q = opt_;
      q.abs_tol = 1e-14;
      const double ii = integrate([&](double s) { return tb.gamma_i(s); }, j.u_minus, j.u_plus, q);
      const double ie = integrate([&](double s) { return tb.gamma_e(s); }, j.u_minus, j.u_plus, q);
      value = (1.0 - a.param) * ii + a.param * ie;
    } else {
      value = zeta_quadrature(j, a.t_star);
    }
    m.add_atom(j.x, value);
  }
  auto field = field_;
  auto u = u_;
  if (u_->has_ac()) {
    double usup = 0.0;
    for (std::size_t i = 0; i < u_->spec().ac->pieces().size(); ++i)
      usup = std::max(usup, u_->spec().ac->piece_deriv_sup(i));
    std::vector<double> br = u_->breaks();
    const auto fb = field_->breaks();
    br.insert(br.end(), fb.begin(), fb.end());
    m.add_density(1.0, Density{[field, u](double x) {
                                 const double du = u->ac_density(x);
                                 return du == 0.0 ? 0.0 : field->b(x, Side::Right, u->value(x)) * du;
                               },
                               br, comp_->cantor_supports(), field_->b_sup() * usup});
  }
  for (const CantorComponent& c : u_->cantor()) {
    m.add_cantor(c.lo, c.hi, c.weight, [field, u](double x) {
      const double t = u->value(x);
      return 0.5 * (field->b(x, Side::Left, t) + field->b(x, Side::Right, t));
    });
  }
  return m;
}

DensityReport PairingContext::densities(const PairingMeasure& pm) const {
  DensityReport r;
  r.variant = pm.variant;
  const Measure dm = density_measure(pm);
  const auto& jumps = u_->jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const JumpPoint& j = jumps[i];
    const JumpAtom& a = pm.jump_atoms[i];
    const TraceBundle tb = traces(j);
    JumpDensity d;
    d.x = j.x;
    d.atom = a.value;
    d.theta = a.value / (j.u_plus - j.u_minus);
    d.trace_atom = dm.atom(j.x);
    d.reprJ_as_printed = a.param * tb.beta_i(j.u_plus) + (1.0 - a.param) * tb.beta_e(j.u_minus);
    d.reprJ_mismatch = std::abs(d.reprJ_as_printed - a.value) > 1e-9;
    r.jumps.push_back(d);
    if (pm.variant == Variant::V) r.theta_V.push_back(std::abs(d.theta));
  }
  // Points of the Cantor set that are not endpoints of removed gaps.
  static const double kSamples[] = {1.0 / 13.0, 1.0 / 10.0, 0.25, 0.75, 0.9, 12.0 / 13.0};
  const int window_depth = 14;
  for (const CantorComponent& c : u_->cantor()) {
    for (double s : kSamples) {
      CantorSample cs;
      cs.x = c.lo + s * (c.hi - c.lo);
      cs.t = u_->value(cs.x);
      const int nu = c.weight > 0.0 ? 1 : -1;
      cs.prediction = nu * 0.5 * (field_->b(cs.x, Side::Left, cs.t) + field_->b(cs.x, Side::Right, cs.t));
      try {
        const LevelSet ls = bv_level_set(*u_, cs.t);
        bool found = false;
        for (const auto& bp : ls.set.reduced_boundary(u_->lo(), u_->hi()))
          if (std::abs(bp.x - cs.x) <= 1e-9 && bp.nu == nu) found = true;
        cs.on_boundary = found;
      } catch (const Error&) {
        cs.on_boundary = false;
      }
      const long idx = cantor_leaf_index(cs.x, c.lo, c.hi, window_depth);
      double lo = c.lo, hi = c.hi;
      for (int d = window_depth - 1; d >= 0; --d) {
        const double third = (hi - lo) / 3.0;
        if ((idx >> d) & 1L)
          lo = hi - third;
        else
          hi = lo + third;
      }
      const double du = std::abs(c.weight) * std::ldexp(1.0, -window_depth);
      cs.measured = measure_eval(pm.measure, Interval::closed(lo, hi), opt_) / du;
      cs.residual = std::abs(cs.prediction - cs.measured);
      r.cantor.push_back(cs);
    }
  }
  return r;
}

}  // namespace bvpair
