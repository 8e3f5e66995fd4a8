#pragma once

// Declarative scenarios: domain, field, u, selection catalog, test functions,
// finite-perimeter sets, checks with parameters, and quadrature settings.
// Read from and written to TOML.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bvpair/bv.hpp"
#include "bvpair/field.hpp"
#include "bvpair/pairing.hpp"
#include "bvpair/testfn.hpp"
#include "json.hpp"

namespace bvpair {

struct TermSpec {
  Expr g;
  std::optional<Expr> G;
  BVSpec A;
};

struct FieldSpec {
  FieldKind kind = FieldKind::Tensor;
  double T = 1.0;
  std::optional<Expr> b0;
  std::optional<Expr> B0;
  std::vector<TermSpec> terms;
};

struct PhiSpec {
  std::string name;
  double center = 0.0;
  double radius = 1.0;
  double amplitude = 1.0;
};

struct SetSpec {
  std::string name;
  std::vector<std::pair<double, double>> intervals;
};

struct CheckSpec {
  std::string name;
  std::optional<double> tol;
  nlohmann::json params = nlohmann::json::object();
};

struct QuadSpec {
  QuadOptions quad;
  int leaf_depth = 12;     // Cantor leaves for the composite's singular part
  int plateau_depth = 12;  // Cantor plateau levels split in t-integrals
};

// The stable check identifiers, in report order.
const std::vector<std::string>& check_names();

struct Scenario {
  std::string name;
  std::string description;
  std::uint64_t seed = 0;
  double lo = 0.0;
  double hi = 1.0;
  FieldSpec field_spec;
  BVSpec u_spec;
  std::vector<std::pair<std::string, SelectionSpec>> selections;
  std::vector<PhiSpec> phi_specs;
  std::vector<SetSpec> set_specs;
  std::vector<CheckSpec> checks;  // per-check parameters and tolerance overrides
  QuadSpec quadrature;
  std::optional<std::string> output_report;
  std::optional<std::string> output_csv;
  std::vector<std::string> warnings;  // unknown keys outside strict mode

  // Built by build_scenario.
  std::shared_ptr<const Field> field;
  std::shared_ptr<const BVFunction> u;
  std::vector<TestFunction> phi;
  std::vector<FinitePerimeterSet> sets;
  std::shared_ptr<const PairingContext> ctx;

  const CheckSpec* check(const std::string& name) const;
  const TestFunction& phi_named(const std::string& name) const;
};

// Throws PARSE_ERROR (syntax, with line and column) or VALIDATION_ERROR.
Scenario parse_scenario(const std::string& path, bool strict = false);
Scenario parse_scenario_string(const std::string& text, const std::string& source = "<string>", bool strict = false);

// Constructs field, u, test functions, sets and the pairing context and
// validates the scenario invariants (t-range, compact containment).
void build_scenario(Scenario& sc);

// Normalized TOML text; parsing it yields an equivalent scenario.
std::string to_toml(const Scenario& sc);

BVSpec bv_spec_from_toml_text(const std::string& text, double lo, double hi);

}  // namespace bvpair
