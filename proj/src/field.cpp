#include "bvpair/field.hpp"

#include <algorithm>
#include <cmath>

#include "bvpair/error.hpp"

namespace bvpair {

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Autonomous: return "autonomous";
    case FieldKind::Separated: return "separated";
    case FieldKind::Tensor: return "tensor";
    case FieldKind::Smooth: return "smooth";
  }
  return "tensor";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "autonomous") return FieldKind::Autonomous;
  if (s == "separated") return FieldKind::Separated;
  if (s == "tensor") return FieldKind::Tensor;
  if (s == "smooth") return FieldKind::Smooth;
  throw Error(ErrorCode::ValidationError, "unknown field kind '" + s + "'");
}

// ------------------------------------------------------------ maximization

namespace {

double golden_max(const Fn& f, double a, double b, double tol, double* value) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  *value = f(t);
  return t;
}

}  // namespace

Argmax maximize(const Fn& f, double a, double b, double lipschitz, double t_tol) {
  if (!(b > a)) {
    const double v = f(a);
    return {a, v, v};
  }
  const double span = b - a;
  const double want = std::ceil(std::sqrt(2.0 * std::max(lipschitz, 0.0) * span / 1e-10));
  const long n = std::clamp(static_cast<long>(want), 64L, 1L << 17);
  const double h = span / static_cast<double>(n);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) vals[static_cast<std::size_t>(i)] = f(i == n ? b : a + h * static_cast<double>(i));
  long best = 0;
  for (long i = 1; i <= n; ++i)
    if (vals[static_cast<std::size_t>(i)] > vals[static_cast<std::size_t>(best)]) best = i;
  Argmax out{best == n ? b : a + h * static_cast<double>(best), vals[static_cast<std::size_t>(best)], 0.0};
  // Candidate cells: grid values within the Lipschitz slack of the best.
  const double slack = lipschitz * h;
  std::vector<long> cands;
  for (long i = 0; i <= n; ++i)
    if (vals[static_cast<std::size_t>(i)] >= out.value - slack) cands.push_back(i);
  std::stable_sort(cands.begin(), cands.end(), [&](long x, long y) {
    return vals[static_cast<std::size_t>(x)] > vals[static_cast<std::size_t>(y)];
  });
  if (cands.size() > 8) cands.resize(8);
  for (long i : cands) {
    const double l = std::max(a, a + h * static_cast<double>(i - 1));
    const double r = std::min(b, a + h * static_cast<double>(i + 1));
    double v = 0.0;
    const double t = golden_max(f, l, r, t_tol, &v);
    const bool better = v > out.value + 1e-15 * std::max(1.0, std::abs(v));
    const bool tie = !better && std::abs(v - out.value) <= 1e-15 * std::max(1.0, std::abs(v)) && t < out.t;
    if (better || tie) {
      out.t = t;
      out.value = v;
    }
  }
  out.certified_bound = std::max(out.value, vals[static_cast<std::size_t>(best)] + 0.5 * slack);
  return out;
}

// ------------------------------------------------------------------ Field

Field::Field(double lo, double hi, FieldKind kind, std::vector<TensorTerm> terms,
             std::optional<AutonomousTerm> autonomous, double T)
    : lo_(lo), hi_(hi), kind_(kind), terms_(std::move(terms)), autonomous_(std::move(autonomous)), T_(T) {
  if (!(T_ > 0.0)) throw Error(ErrorCode::ValidationError, "field T must be positive");
  switch (kind_) {
    case FieldKind::Autonomous:
      if (!terms_.empty() || !autonomous_)
        throw Error(ErrorCode::ValidationError, "autonomous fields have only the b0 term");
      break;
    case FieldKind::Separated:
      if (terms_.size() != 1) throw Error(ErrorCode::ValidationError, "separated fields have exactly one term");
      break;
    case FieldKind::Tensor:
      if (terms_.empty()) throw Error(ErrorCode::ValidationError, "tensor fields need at least one term");
      break;
    case FieldKind::Smooth:
      for (const TensorTerm& t : terms_)
        if (!t.A->jumps().empty() || t.A->has_cantor())
          throw Error(ErrorCode::ValidationError, "smooth fields need coefficients without jumps or Cantor parts");
      break;
  }
  std::vector<std::pair<double, double>> supports;
  for (const TensorTerm& t : terms_) {
    if (t.A->lo() != lo_ || t.A->hi() != hi_)
      throw Error(ErrorCode::ValidationError, "field coefficients must live on the scenario domain");
    for (const CantorComponent& c : t.A->cantor()) {
      for (const auto& [l, h] : supports)
        if (!(l == c.lo && h == c.hi) && c.lo < h && l < c.hi)
          throw Error(ErrorCode::InvalidCantorOverlap, "Cantor supports of the coefficients must be identical or disjoint");
      supports.emplace_back(c.lo, c.hi);
    }
  }
  if (terms_.size() == 1 && !autonomous_) {
    b_sup_ = terms_[0].g_sup * terms_[0].A->sup_bound();
  } else {
    b_sup_ = autonomous_ ? autonomous_->sup : 0.0;
    for (const TensorTerm& t : terms_) b_sup_ += t.g_sup * t.A->sup_bound();
  }
}

TensorTerm Field::make_term(const Expr& g, std::optional<Expr> G, std::shared_ptr<const BVFunction> A, double T) {
  TensorTerm term;
  term.g = g;
  if (!G) G = antiderivative(g);
  if (!G)
    throw Error(ErrorCode::ValidationError,
                "cannot derive a closed-form primitive of g = " + to_string(g) + "; provide G explicitly");
  term.G = *G;
  if (std::abs(eval(term.G, 0.0)) > 1e-12) throw Error(ErrorCode::ValidationError, "primitive G must vanish at 0");
  for (int i = 0; i <= 32; ++i) {
    const double t = -T + 2.0 * T * (i + 0.37) / 33.0;
    const double gv = eval(g, t);
    if (std::abs(deriv(term.G, t) - gv) > 1e-9 * (1.0 + std::abs(gv)))
      throw Error(ErrorCode::ValidationError, "G' differs from g at t = " + std::to_string(t));
  }
  term.g_lip = sup_abs_deriv(g, -T, T, 256);
  const Expr gg = g;
  term.g_sup = maximize([gg](double t) { return std::abs(eval(gg, t)); }, -T, T, term.g_lip).value;
  term.A = std::move(A);
  return term;
}

AutonomousTerm Field::make_autonomous(const Expr& b0, std::optional<Expr> B0, double T) {
  AutonomousTerm a;
  a.b0 = b0;
  if (!B0) B0 = antiderivative(b0);
  if (!B0) throw Error(ErrorCode::ValidationError, "cannot derive a primitive of b0; provide B0 explicitly");
  a.B0 = *B0;
  if (std::abs(eval(a.B0, 0.0)) > 1e-12) throw Error(ErrorCode::ValidationError, "primitive B0 must vanish at 0");
  for (int i = 0; i <= 32; ++i) {
    const double t = -T + 2.0 * T * (i + 0.37) / 33.0;
    const double bv = eval(b0, t);
    if (std::abs(deriv(a.B0, t) - bv) > 1e-9 * (1.0 + std::abs(bv)))
      throw Error(ErrorCode::ValidationError, "B0' differs from b0 at t = " + std::to_string(t));
  }
  const double lip = sup_abs_deriv(b0, -T, T, 256);
  a.sup = maximize([b0](double t) { return std::abs(eval(b0, t)); }, -T, T, lip).value;
  return a;
}

void Field::check_t(double t) const {
  if (!(std::abs(t) <= T_ * (1.0 + 1e-12)))
    throw Error(ErrorCode::TRange, "t = " + std::to_string(t) + " outside [-T, T] with T = " + std::to_string(T_));
}

double Field::b(double x, Side side, double t) const {
  check_t(t);
  double s = autonomous_ ? eval(autonomous_->b0, t) : 0.0;
  for (const TensorTerm& k : terms_) s += eval(k.g, t) * k.A->eval(x, side);
  return s;
}

double Field::B(double x, Side side, double t) const {
  check_t(t);
  double s = autonomous_ ? eval(autonomous_->B0, t) : 0.0;
  for (const TensorTerm& k : terms_) s += eval(k.G, t) * k.A->eval(x, side);
  return s;
}

Measure Field::div_bt(double t) const {
  check_t(t);
  std::vector<std::pair<double, Measure>> parts;
  for (const TensorTerm& k : terms_) parts.emplace_back(eval(k.g, t), k.A->derivative());
  if (parts.empty()) return Measure(lo_, hi_);
  Measure m = measure_combine(parts);
  return m;
}

Measure Field::div_Bt(double t) const {
  check_t(t);
  std::vector<std::pair<double, Measure>> parts;
  for (const TensorTerm& k : terms_) parts.emplace_back(eval(k.G, t), k.A->derivative());
  if (parts.empty()) return Measure(lo_, hi_);
  return measure_combine(parts);
}

std::vector<double> Field::jump_points() const {
  std::vector<double> xs;
  for (const TensorTerm& k : terms_)
    for (const JumpPoint& j : k.A->jumps()) xs.push_back(j.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<double> Field::breaks() const {
  std::vector<double> xs;
  for (const TensorTerm& k : terms_) {
    auto b = k.A->breaks();
    xs.insert(xs.end(), b.begin(), b.end());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<Segment> Field::rough() const {
  std::vector<Segment> r;
  for (const TensorTerm& k : terms_)
    for (const CantorComponent& c : k.A->cantor()) r.push_back({c.lo, c.hi});
  return r;
}

Field Field::negated() const {
  std::vector<TensorTerm> terms = terms_;
  for (TensorTerm& k : terms) {
    k.g = ex::neg(k.g);
    k.G = ex::neg(k.G);
  }
  std::optional<AutonomousTerm> a = autonomous_;
  if (a) {
    a->b0 = ex::neg(a->b0);
    a->B0 = ex::neg(a->B0);
  }
  return Field(lo_, hi_, kind_, std::move(terms), std::move(a), T_);
}

TraceBundle field_traces(const Field& f, double x0, int nu) {
  if (!(x0 > f.lo() && x0 < f.hi())) throw Error(ErrorCode::InvalidArgument, "trace point outside the domain");
  return TraceBundle{x0, nu >= 0 ? 1 : -1, &f};
}

// ------------------------------------------------------------ SigmaSystem

SigmaSystem::SigmaSystem(std::shared_ptr<const Field> field) : field_(std::move(field)) {
  const auto& terms = field_->terms();
  const std::size_t n = terms.size();
  for (double x : field_->jump_points()) {
    AtomPart a;
    a.x = x;
    a.phi.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      if (const JumpPoint* j = terms[k].A->jump_at(x)) a.phi[k] = j->size();
    for (double v : a.phi) a.m += std::abs(v);
    for (double& v : a.phi) v /= a.m;
    a.s = envelope(a.phi);
    atoms_.push_back(std::move(a));
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (const CantorComponent& c : terms[k].A->cantor()) {
      auto it = std::find_if(cantor_.begin(), cantor_.end(),
                             [&](const CantorGroup& g) { return g.lo == c.lo && g.hi == c.hi; });
      if (it == cantor_.end()) {
        CantorGroup g;
        g.lo = c.lo;
        g.hi = c.hi;
        g.phi.assign(n, 0.0);
        cantor_.push_back(g);
        it = cantor_.end() - 1;
      }
      it->phi[k] += c.weight;
    }
  }
  for (CantorGroup& g : cantor_) {
    for (double v : g.phi) g.m += std::abs(v);
    for (double& v : g.phi) v /= g.m;
    g.s = envelope(g.phi);
  }
  std::sort(cantor_.begin(), cantor_.end(), [](const CantorGroup& a, const CantorGroup& b) { return a.lo < b.lo; });
}

double SigmaSystem::envelope(const std::vector<double>& phi) const {
  const auto& terms = field_->terms();
  std::size_t active = 0, last = 0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    if (phi[k] != 0.0) {
      ++active;
      last = k;
    }
  if (active == 0) return 0.0;
  if (active == 1) return std::abs(phi[last]) * terms[last].g_sup;
  double lip = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) lip += std::abs(phi[k]) * terms[k].g_lip;
  const Fn f = [&](double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k)
      if (phi[k] != 0.0) s += eval(terms[k].g, t) * phi[k];
    return std::abs(s);
  };
  return maximize(f, -field_->T(), field_->T(), lip).value;
}

const SigmaSystem::AtomPart* SigmaSystem::atom_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [](const AtomPart& a, double v) { return a.x < v; });
  if (it != atoms_.end() && it->x == x) return &*it;
  return nullptr;
}

double SigmaSystem::m_ac(double x) const {
  double s = 0.0;
  for (const TensorTerm& k : field_->terms()) s += std::abs(k.A->ac_density(x));
  return s;
}

std::vector<double> SigmaSystem::phi_ac(double x) const {
  const auto& terms = field_->terms();
  std::vector<double> phi(terms.size(), 0.0);
  const double m = m_ac(x);
  if (m == 0.0) return phi;
  for (std::size_t k = 0; k < terms.size(); ++k) phi[k] = terms[k].A->ac_density(x) / m;
  return phi;
}

double SigmaSystem::s_ac(double x) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = s_cache_.find(x);
    if (it != s_cache_.end()) return it->second;
  }
  const double s = envelope(phi_ac(x));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (s_cache_.size() > 200000) s_cache_.clear();
  s_cache_.emplace(x, s);
  return s;
}

Measure SigmaSystem::m() const {
  Measure out(field_->lo(), field_->hi());
  for (const AtomPart& a : atoms_) out.add_atom(a.x, a.m);
  for (const CantorGroup& g : cantor_) out.add_cantor(g.lo, g.hi, g.m);
  bool any_ac = false;
  for (const TensorTerm& k : field_->terms()) any_ac = any_ac || k.A->has_ac();
  if (any_ac) {
    auto f = field_;
    double sup = 0.0;
    for (const TensorTerm& k : f->terms())
      if (k.A->has_ac())
        for (std::size_t i = 0; i < k.A->spec().ac->pieces().size(); ++i)
          sup += k.A->spec().ac->piece_deriv_sup(i);
    out.add_density(1.0, Density{[f](double x) {
                                   double s = 0.0;
                                   for (const TensorTerm& k : f->terms()) s += std::abs(k.A->ac_density(x));
                                   return s;
                                 },
                                 f->breaks(), f->rough(), sup});
  }
  return out;
}

Measure SigmaSystem::sigma() const {
  Measure out(field_->lo(), field_->hi());
  for (const AtomPart& a : atoms_) out.add_atom(a.x, a.s * a.m);
  for (const CantorGroup& g : cantor_) out.add_cantor(g.lo, g.hi, g.s * g.m);
  bool any_ac = false;
  for (const TensorTerm& k : field_->terms()) any_ac = any_ac || k.A->has_ac();
  if (any_ac) {
    const SigmaSystem* self = this;
    double sup = 0.0;
    for (const TensorTerm& k : field_->terms())
      if (k.A->has_ac())
        for (std::size_t i = 0; i < k.A->spec().ac->pieces().size(); ++i)
          sup += k.g_sup * k.A->spec().ac->piece_deriv_sup(i);
    out.add_density(1.0, Density{[self](double x) { return self->s_ac(x) * self->m_ac(x); }, field_->breaks(),
                                 field_->rough(), sup});
  }
  return out;
}

double SigmaSystem::sigma_atom(double x) const {
  const AtomPart* a = atom_at(x);
  return a ? a->s * a->m : 0.0;
}

const std::vector<double>* SigmaSystem::phi_at(const Locator& loc, double* s) const {
  switch (loc.kind) {
    case Locator::Kind::Atom: {
      const AtomPart* a = atom_at(loc.x);
      if (!a) throw Error(ErrorCode::LocatorMiss, "no atom of m at x = " + std::to_string(loc.x));
      *s = a->s;
      return &a->phi;
    }
    case Locator::Kind::Cantor: {
      if (loc.index < 0 || static_cast<std::size_t>(loc.index) >= cantor_.size())
        throw Error(ErrorCode::LocatorMiss, "no Cantor group with index " + std::to_string(loc.index));
      *s = cantor_[static_cast<std::size_t>(loc.index)].s;
      return &cantor_[static_cast<std::size_t>(loc.index)].phi;
    }
    case Locator::Kind::Ac: break;
  }
  return nullptr;
}

double SigmaSystem::f(const Locator& loc, double t) const {
  field_->check_t(t);
  const auto& terms = field_->terms();
  double s = 0.0;
  std::vector<double> local;
  const std::vector<double>* phi = phi_at(loc, &s);
  if (!phi) {
    local = phi_ac(loc.x);
    phi = &local;
    s = s_ac(loc.x);
  }
  if (s == 0.0) return 0.0;
  double v = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) v += eval(terms[k].g, t) * (*phi)[k];
  return v / s;
}

double SigmaSystem::F(const Locator& loc, double t) const {
  field_->check_t(t);
  const auto& terms = field_->terms();
  double s = 0.0;
  std::vector<double> local;
  const std::vector<double>* phi = phi_at(loc, &s);
  if (!phi) {
    local = phi_ac(loc.x);
    phi = &local;
    s = s_ac(loc.x);
  }
  if (s == 0.0) return 0.0;
  double v = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) v += eval(terms[k].G, t) * (*phi)[k];
  return v / s;
}

// -------------------------------------------------------------- Composite

long cantor_leaf_index(double x, double lo, double hi, int depth) {
  double y = (x - lo) / (hi - lo);
  if (y < 0.0 || y > 1.0) return -1;
  long idx = 0;
  for (int i = 0; i < depth; ++i) {
    y *= 3.0;
    int d = static_cast<int>(std::floor(y));
    d = std::clamp(d, 0, 2);
    y -= d;
    if (d == 1) return -1;
    idx = idx * 2 + (d == 2 ? 1 : 0);
  }
  return idx;
}

namespace {

bool has_ac_on(const BVFunction& f, double lo, double hi) {
  if (!f.spec().ac) return false;
  const Piecewise& p = *f.spec().ac;
  for (std::size_t i = 0; i < p.pieces().size(); ++i)
    if (p.breaks()[i] < hi && p.breaks()[i + 1] > lo && !p.piece_is_constant(i)) return true;
  return false;
}

}  // namespace

Composite::Composite(std::shared_ptr<const Field> field, std::shared_ptr<const BVFunction> u, const QuadOptions& opt,
                     int leaf_depth)
    : field_(std::move(field)), u_(std::move(u)), opt_(opt), leaf_depth_(leaf_depth) {
  if (u_->sup_bound() + 1.0 > field_->T() * (1.0 + 1e-12))
    throw Error(ErrorCode::TRange, "t-range: ||u||_inf + 1 = " + std::to_string(u_->sup_bound() + 1.0) +
                                       " exceeds T = " + std::to_string(field_->T()));
  std::vector<Segment> sup = u_->rough();
  for (const Segment& s : field_->rough()) sup.push_back(s);
  std::sort(sup.begin(), sup.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  for (const Segment& s : sup) {
    if (!supports_.empty()) {
      const Segment& l = supports_.back();
      if (l.lo == s.lo && l.hi == s.hi) continue;
      if (s.lo < l.hi) throw Error(ErrorCode::InvalidCantorOverlap, "Cantor supports of u and A_k must be identical or disjoint");
    }
    supports_.push_back(s);
  }
  for (const Segment& s : supports_) {
    bool ac = has_ac_on(*u_, s.lo, s.hi);
    for (const TensorTerm& k : field_->terms()) ac = ac || has_ac_on(*k.A, s.lo, s.hi);
    const std::size_t count = std::size_t{1} << leaf_depth_;
    std::vector<double> dens(count, 0.0);
    const double scale = std::ldexp(1.0, leaf_depth_);
    // Enumerate leaves in address order.
    std::vector<std::pair<double, double>> nodes{{s.lo, s.hi}};
    for (int d = 0; d < leaf_depth_; ++d) {
      std::vector<std::pair<double, double>> next;
      next.reserve(nodes.size() * 2);
      for (const auto& [l, h] : nodes) {
        const double third = (h - l) / 3.0;
        next.emplace_back(l, l + third);
        next.emplace_back(h - third, h);
      }
      nodes.swap(next);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto [l, h] = nodes[i];
      // Widen into the adjacent gaps (each at least one leaf wide), where u is
      // constant, so rounding in l and h is not amplified by the Holder modulus.
      const double pad = 0.25 * (h - l);
      double r = leaf_residual(l - pad, h + pad);
      if (ac) r -= kronrod15([this](double x) { return ac_density(x); }, l - pad, h + pad);
      dens[i] = r * scale;
    }
    std::vector<double> prefix(count + 1, 0.0);
    for (std::size_t i = 0; i < count; ++i) prefix[i + 1] = prefix[i] + dens[i];
    leaf_density_.push_back(std::move(dens));
    leaf_prefix_.push_back(std::move(prefix));
  }
}

double Composite::v(double x, Side side) const { return field_->B(x, side, u_->eval(x, side)); }

double Composite::ac_density(double x) const {
  const ia::Dual<double> ud = u_->eval_dual(x);
  double d = 0.0;
  if (const auto& a = field_->autonomous()) d += eval_as(*a->B0, ud).d;
  for (const TensorTerm& k : field_->terms()) {
    const ia::Dual<double> Gd = eval_as(*k.G, ud);
    const ia::Dual<double> Ad = k.A->eval_dual(x);
    d += Gd.d * Ad.v + Gd.v * Ad.d;
  }
  return d;
}

double Composite::set_function(const Interval& i) const {
  if (i.empty()) return 0.0;
  const double right = i.include_hi ? v(i.hi, Side::Right) : v(i.hi, Side::Left);
  const double left = i.include_lo ? v(i.lo, Side::Left) : v(i.lo, Side::Right);
  return right - left;
}

double Composite::leaf_residual(double lo, double hi) const {
  double r = set_function(Interval::closed(lo, hi));
  for (double p : atom_points())
    if (p >= lo && p <= hi) r -= atom(p);
  return r;
}

double Composite::cantor_density(std::size_t support, double x) const {
  const Segment& s = supports_[support];
  double y = (x - s.lo) / (s.hi - s.lo);
  if (y < 0.0 || y > 1.0) return 0.0;
  // Gap points get the mean over the node whose middle third contains them,
  // so that midpoint rules at any level see the node's exact average.
  std::size_t idx = 0;
  for (int i = 0; i < leaf_depth_; ++i) {
    y *= 3.0;
    const int d = std::clamp(static_cast<int>(std::floor(y)), 0, 2);
    y -= d;
    if (d == 1) {
      const std::size_t width = std::size_t{1} << (leaf_depth_ - i);
      const auto& pre = leaf_prefix_[support];
      return (pre[(idx + 1) * width] - pre[idx * width]) / static_cast<double>(width);
    }
    idx = idx * 2 + (d == 2 ? 1 : 0);
  }
  return leaf_density_[support][idx];
}

std::vector<double> Composite::atom_points() const {
  std::vector<double> xs = field_->jump_points();
  for (const JumpPoint& j : u_->jumps()) xs.push_back(j.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<double> Composite::breaks() const {
  std::vector<double> xs = field_->breaks();
  auto ub = u_->breaks();
  xs.insert(xs.end(), ub.begin(), ub.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double Composite::weak_div(const TestFunction& phi) const {
  std::vector<double> br = breaks();
  br.insert(br.end(), phi.breaks().begin(), phi.breaks().end());
  return -integrate([&](double x) { return v(x, Side::Right) * phi.deriv(x); }, phi.support_lo(), phi.support_hi(),
                    br, supports_, opt_);
}

double Composite::structural_div(const TestFunction& phi) const {
  double s = 0.0;
  for (double p : atom_points()) s += phi(p) * atom(p);
  std::vector<double> br = breaks();
  br.insert(br.end(), phi.breaks().begin(), phi.breaks().end());
  s += integrate([&](double x) { return phi(x) * ac_density(x); }, phi.support_lo(), phi.support_hi(), br, supports_,
                 opt_);
  for (std::size_t k = 0; k < supports_.size(); ++k) {
    const CantorComponent c{1.0, supports_[k].lo, supports_[k].hi};
    s += integrate_cantor([&](double x) { return phi(x) * cantor_density(k, x); }, c, phi.support_lo(),
                          phi.support_hi(), opt_);
  }
  return s;
}

std::pair<double, double> Composite::lemma_bound(const SigmaSystem& sys, const Interval& k) const {
  double tv = 0.0;
  for (double p : atom_points())
    if (k.contains(p)) tv += std::abs(atom(p));
  tv += integrate([&](double x) { return std::abs(ac_density(x)); }, k.lo, k.hi, breaks(), supports_, opt_);
  for (std::size_t i = 0; i < supports_.size(); ++i) {
    const CantorComponent c{1.0, supports_[i].lo, supports_[i].hi};
    tv += integrate_cantor([&](double x) { return std::abs(cantor_density(i, x)); }, c, k.lo, k.hi, opt_);
  }
  // ||u||_{L^inf(K)} from the monotone pieces meeting K.
  double usup = 0.0;
  if (u_->certified()) {
    for (const MonotonePiece& mp : u_->monotone_pieces()) {
      const double a = std::max(mp.a, k.lo);
      const double b = std::min(mp.b, k.hi);
      if (!(b > a)) continue;
      usup = std::max({usup, std::abs(u_->eval(a, Side::Right)), std::abs(u_->eval(b, Side::Left))});
    }
  } else {
    usup = u_->sup_bound();
  }
  const double bound = usup * measure_eval(sys.sigma(), k, opt_) + field_->b_sup() * u_->total_variation(k);
  return {tv, bound};
}

}  // namespace bvpair
