#pragma once

// Named checks over a built scenario. Each check compares quantities computed
// along independent routes and records named residuals with tolerances.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvpair/scenario.hpp"
#include "json.hpp"

namespace bvpair {

// Convergence table written as CSV with columns n, value, abs_error.
struct Table {
  std::string name;
  struct Row {
    double n, value, abs_error;
  };
  std::vector<Row> rows;
};

struct CheckResult {
  std::string name;
  bool applicable = true;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;  // one per residual
  double tolerance = 0.0;                    // nominal tolerance of the check
  bool pass = true;
  nlohmann::json details = nlohmann::json::object();
  std::vector<Table> tables;
  double seconds = 0.0;  // wall time; only reported on request

  // Records residual <= tol (NaN fails).
  void add(const std::string& key, double residual, double tol);
};

struct RunOptions {
  std::vector<std::string> only;   // empty: every check
  double tol_scale = 1.0;
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  int jobs = 1;
};

// Runs one check by name. Exceptions from the numerics are caught and turned
// into a failing result with the message in details.error.
CheckResult run_check(const Scenario& sc, const std::string& name, const RunOptions& opt = {});

// Runs the selected checks on a worker pool; results are sorted by name and do
// not depend on opt.jobs.
std::vector<CheckResult> run_checks(const Scenario& sc, const RunOptions& opt = {});

// The four boundary identities for one set and one selection parameter
// (constant over the jump set). lhs/rhs in the order open-external,
// closed-external, open-internal, closed-internal.
struct GaussGreen {
  double lhs[4];
  double rhs[4];
};
GaussGreen gauss_green_terms(const PairingContext& ctx, const FinitePerimeterSet& e, double param);

// Integral over t of the linear pairing of b_t with the level set {u > t}
// (external Lambda convention on the jump set), tested against phi.
double coarea_rhs(const PairingContext& ctx, double Lambda, const TestFunction& phi, int plateau_depth = 12);

// Deterministic per-check seed.
std::uint64_t check_seed(std::uint64_t seed, const std::string& name);

}  // namespace bvpair
