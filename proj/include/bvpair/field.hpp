#pragma once

// Tensor-sum fields b(x, t) = b0(t) + sum_k g_k(t) A_k(x), their primitives
// B(x, t) = B0(t) + sum_k G_k(t) A_k(x), the dominating system (sigma, f, F),
// one-sided normal traces, and the composite v(x) = B(x, u(x)).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bvpair/bv.hpp"
#include "bvpair/expr.hpp"
#include "bvpair/measure.hpp"
#include "bvpair/testfn.hpp"

namespace bvpair {

struct TensorTerm {
  Expr g;
  Expr G;  // primitive with G(0) = 0
  std::shared_ptr<const BVFunction> A;
  double g_sup = 0.0;  // sup |g| on [-T, T]
  double g_lip = 0.0;  // certified Lipschitz bound of g on [-T, T]
};

struct AutonomousTerm {
  Expr b0;
  Expr B0;
  double sup = 0.0;
};

enum class FieldKind { Autonomous, Separated, Tensor, Smooth };
std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

// Result of a one-dimensional maximization over [a, b].
struct Argmax {
  double t = 0.0;
  double value = 0.0;
  double certified_bound = 0.0;  // value + Lipschitz slack of the grid
};

// Maximizes f over [a, b]: uniform grid sized from the Lipschitz constant,
// then golden-section refinement around the leading cells. Ties go to the
// smallest t.
Argmax maximize(const Fn& f, double a, double b, double lipschitz, double t_tol = 1e-12);

class Field {
 public:
  Field(double lo, double hi, FieldKind kind, std::vector<TensorTerm> terms, std::optional<AutonomousTerm> autonomous,
        double T);

  // Builds a term from g (and optionally G); derives G when possible and
  // checks G' = g and G(0) = 0.
  static TensorTerm make_term(const Expr& g, std::optional<Expr> G, std::shared_ptr<const BVFunction> A, double T);
  static AutonomousTerm make_autonomous(const Expr& b0, std::optional<Expr> B0, double T);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double T() const { return T_; }
  FieldKind kind() const { return kind_; }
  const std::vector<TensorTerm>& terms() const { return terms_; }
  const std::optional<AutonomousTerm>& autonomous() const { return autonomous_; }
  double b_sup() const { return b_sup_; }

  double b(double x, Side side, double t) const;
  double B(double x, Side side, double t) const;

  Measure div_bt(double t) const;
  Measure div_Bt(double t) const;

  // Jump points of the coefficients A_k.
  std::vector<double> jump_points() const;
  std::vector<double> breaks() const;
  std::vector<Segment> rough() const;

  Field negated() const;

  void check_t(double t) const;

 private:
  double lo_, hi_;
  FieldKind kind_;
  std::vector<TensorTerm> terms_;
  std::optional<AutonomousTerm> autonomous_;
  double T_;
  double b_sup_ = 0.0;
};

struct TraceBundle {
  double x0 = 0.0;
  int nu = 1;
  const Field* field = nullptr;

  Side inner() const { return nu > 0 ? Side::Right : Side::Left; }
  Side outer() const { return nu > 0 ? Side::Left : Side::Right; }
  double gamma_i(double t) const { return nu * field->b(x0, inner(), t); }
  double gamma_e(double t) const { return nu * field->b(x0, outer(), t); }
  double beta_i(double t) const { return nu * field->B(x0, inner(), t); }
  double beta_e(double t) const { return nu * field->B(x0, outer(), t); }
  double tr_star(double t) const { return 0.5 * (beta_i(t) + beta_e(t)); }
  double tr_star_b(double t) const { return 0.5 * (gamma_i(t) + gamma_e(t)); }
};

TraceBundle field_traces(const Field& f, double x0, int nu);

struct Locator {
  enum class Kind { Atom, Cantor, Ac };
  Kind kind = Kind::Ac;
  double x = 0.0;
  int index = 0;
};

class SigmaSystem {
 public:
  struct AtomPart {
    double x = 0.0;
    double m = 0.0;
    std::vector<double> phi;
    double s = 0.0;
  };
  struct CantorGroup {
    double lo = 0.0, hi = 0.0;
    double m = 0.0;
    std::vector<double> phi;
    double s = 0.0;
  };

  explicit SigmaSystem(std::shared_ptr<const Field> field);

  const Field& field() const { return *field_; }
  const std::vector<AtomPart>& atoms() const { return atoms_; }
  const std::vector<CantorGroup>& cantor_groups() const { return cantor_; }
  const AtomPart* atom_at(double x) const;

  double m_ac(double x) const;
  double s_ac(double x) const;  // memoized envelope on the AC part

  Measure m() const;
  Measure sigma() const;
  double sigma_atom(double x) const;

  double f(const Locator& loc, double t) const;
  double F(const Locator& loc, double t) const;

 private:
  std::shared_ptr<const Field> field_;
  std::vector<AtomPart> atoms_;
  std::vector<CantorGroup> cantor_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, double> s_cache_;

  double envelope(const std::vector<double>& phi) const;
  std::vector<double> phi_ac(double x) const;
  const std::vector<double>* phi_at(const Locator& loc, double* s) const;
};

// Composite v(x) = B(x, u(x)) with one-sided values, its interval set
// function and two independent actions of its divergence on test functions.
class Composite {
 public:
  Composite(std::shared_ptr<const Field> field, std::shared_ptr<const BVFunction> u, const QuadOptions& opt,
            int leaf_depth = 12);

  double v(double x, Side side) const;
  double atom(double x) const { return v(x, Side::Right) - v(x, Side::Left); }
  // Derivative of v at a point off all breaks (absolutely continuous part).
  double ac_density(double x) const;
  double set_function(const Interval& i) const;

  // Cantor part of Div v per depth-`leaf_depth` leaf, divided by the leaf's
  // Cantor mass (density against the unweighted Cantor measure).
  double cantor_density(std::size_t support, double x) const;
  const std::vector<Segment>& cantor_supports() const { return supports_; }

  double weak_div(const TestFunction& phi) const;
  double structural_div(const TestFunction& phi) const;
  // |Div v|(K) and the bound ||u||_{L^inf(K)} sigma(K) + ||b|| |Du|(K).
  std::pair<double, double> lemma_bound(const SigmaSystem& sys, const Interval& k) const;

  std::vector<double> breaks() const;
  std::vector<double> atom_points() const;

 private:
  std::shared_ptr<const Field> field_;
  std::shared_ptr<const BVFunction> u_;
  QuadOptions opt_;
  int leaf_depth_;
  std::vector<Segment> supports_;
  std::vector<std::vector<double>> leaf_density_;
  std::vector<std::vector<double>> leaf_prefix_;

  double leaf_residual(double lo, double hi) const;
};

// Index of the depth-d leaf of [lo, hi] containing x (binary address of the
// ternary digits 0/2), or -1 when x lies in a removed gap.
long cantor_leaf_index(double x, double lo, double hi, int depth);

}  // namespace bvpair
