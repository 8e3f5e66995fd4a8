#pragma once

// The five nonlinear pairing measures (internal, external, standard, L, V),
// the selection operators acting on the jump set of u, and three
// independently computed descriptions of every pairing:
//   definition   -sum_k G_k(u^lambda) DA_k + Div v   (PairingContext::pairing)
//   weak form    -int v phi' - int phi F dsigma       (PairingContext::weak_pair)
//   densities    traces on J_u, b(x,u) u', b* D^c u   (PairingContext::density_measure)

#include <memory>
#include <string>
#include <vector>

#include "bvpair/bv.hpp"
#include "bvpair/field.hpp"
#include "bvpair/measure.hpp"
#include "bvpair/testfn.hpp"

namespace bvpair {

enum class Variant { Internal, External, Standard, L, V };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

enum class SelectionKind { Const, MaxF, MinZeta, MatchExternal, Explicit };

struct SelectionSpec {
  SelectionKind kind = SelectionKind::Const;
  double value = 0.5;          // constant c, or Lambda for MatchExternal
  std::vector<double> values;  // Explicit: one value per jump, in x order

  static SelectionSpec constant(double c) { return {SelectionKind::Const, c, {}}; }
  static SelectionSpec max_f() { return {SelectionKind::MaxF, 0.0, {}}; }
  static SelectionSpec min_zeta() { return {SelectionKind::MinZeta, 0.0, {}}; }
  static SelectionSpec match(double Lambda) { return {SelectionKind::MatchExternal, Lambda, {}}; }
  static SelectionSpec explicit_values(std::vector<double> v) { return {SelectionKind::Explicit, 0.0, std::move(v)}; }
};

std::string describe(const SelectionSpec& s);

// Values in [0, 1] attached to the jump points of one u.
struct Selection {
  SelectionSpec provenance;
  std::vector<double> x;
  std::vector<double> lambda;

  double at(double point) const;
};

struct JumpAtom {
  double x = 0.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  int nu = 1;
  double param = 0.0;     // lambda, Lambda, or the witness parameter
  double t_star = 0.0;    // representative value used in the sigma term
  double sigma_term = 0.0;  // sum_k G_k * DA_k({x}) subtracted from Div v
  double div_v = 0.0;
  double value = 0.0;
};

struct PairingMeasure {
  Variant variant = Variant::Internal;
  Measure measure;
  std::vector<JumpAtom> jump_atoms;
  Selection selection;
};

struct LResult {
  PairingMeasure pm;
  Selection witness;
  std::vector<double> F_hat;  // per jump, max of F over [u-, u+] (0 without sigma mass)
};

struct VResult {
  PairingMeasure pm;
  Selection lambda_V;
  std::vector<double> theta_V;  // |atom| / (u+ - u-)
};

struct MatchResult {
  Selection lambda;
  std::vector<double> residual;  // |F(u^lambda) - combination| per jump
};

struct ReverseMatch {
  Selection Lambda;
  std::vector<double> R;  // F(u^lambda) - combination with the clamped Lambda
};

struct JumpDensity {
  double x = 0.0;
  double atom = 0.0;
  double theta = 0.0;        // atom / (u+ - u-)
  double trace_atom = 0.0;   // same atom from trace quadrature
  double reprJ_as_printed = 0.0;
  bool reprJ_mismatch = false;
};

struct CantorSample {
  double x = 0.0;
  double t = 0.0;
  double prediction = 0.0;   // nu_E * b*(x, t)
  double measured = 0.0;     // pairing mass / |D^c u| on the leaf window
  double residual = 0.0;
  bool on_boundary = true;   // x in the reduced boundary of {u > t}
};

struct DensityReport {
  Variant variant = Variant::Internal;
  std::vector<JumpDensity> jumps;
  std::vector<CantorSample> cantor;
  std::vector<double> theta_V;
};

class PairingContext {
 public:
  PairingContext(std::shared_ptr<const Field> field, std::shared_ptr<const BVFunction> u, QuadOptions opt = {},
                 int leaf_depth = 12);

  const Field& field() const { return *field_; }
  const BVFunction& u() const { return *u_; }
  const SigmaSystem& sigma() const { return *sys_; }
  const Composite& composite() const { return *comp_; }
  const QuadOptions& opt() const { return opt_; }
  std::shared_ptr<const Field> field_ptr() const { return field_; }
  std::shared_ptr<const BVFunction> u_ptr() const { return u_; }

  TraceBundle traces(const JumpPoint& j) const { return field_traces(*field_, j.x, j.nu); }
  // Jump profile from the primitives' traces and from quadrature of the
  // traces of b_t.
  double zeta(const JumpPoint& j, double t) const;
  double zeta_quadrature(const JumpPoint& j, double t) const;
  // sum_k G_k(t) DA_k({x}).
  double g_dA(double x, double t) const;

  Selection resolve(const SelectionSpec& spec) const;
  Selection constant(double c) const { return resolve(SelectionSpec::constant(c)); }

  PairingMeasure internal(const Selection& lambda) const;
  PairingMeasure external(const Selection& Lambda) const;
  PairingMeasure standard() const;
  LResult L() const;
  VResult V() const;
  // Internal/external take the selection; standard, L and V ignore it.
  PairingMeasure pairing(Variant v, const Selection& sel) const;

  MatchResult match_external(const Selection& Lambda) const;
  ReverseMatch match_reverse(const Selection& lambda) const;

  // Weak-form action -int v phi' dx - int phi F dsigma.
  double weak_pair(const PairingMeasure& pm, const TestFunction& phi) const;
  // The same pairing rebuilt from trace and density formulas.
  Measure density_measure(const PairingMeasure& pm) const;
  DensityReport densities(const PairingMeasure& pm) const;

  // Absolutely continuous density b(x, u(x)) u'(x).
  double ac_density(double x) const;

 private:
  std::shared_ptr<const Field> field_;
  std::shared_ptr<const BVFunction> u_;
  QuadOptions opt_;
  std::shared_ptr<const SigmaSystem> sys_;
  std::shared_ptr<const Composite> comp_;

  void check_selection(const Selection& s) const;
  double g_dA_lipschitz(double x) const;
  PairingMeasure assemble(Variant v, const Selection& sel, const std::vector<JumpAtom>& atoms) const;
  JumpAtom atom_from_t(const JumpPoint& j, double param, double t) const;
  double F_bar(const PairingMeasure& pm, double x) const;
  // Per jump of u: (maximizer of sum_k G_k DA_k over [u-, u+], its value).
  std::vector<std::pair<double, double>> max_points() const;
  // Per jump of u: smallest minimizer of |zeta| over [u-, u+].
  std::vector<double> min_zeta_points() const;
};

}  // namespace bvpair
