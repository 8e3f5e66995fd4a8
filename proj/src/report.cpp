#include "bvpair/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "bvpair/error.hpp"

namespace bvpair {

using nlohmann::json;

namespace {

json environment_json(const Scenario& sc) {
  const QuadSpec& q = sc.quadrature;
  return json{{"abs_tol", q.quad.abs_tol},
              {"cantor_depth", q.quad.cantor_depth},
              {"cantor_min_depth", q.quad.cantor_min_depth},
              {"gap_depth", q.quad.gap_depth},
              {"leaf_depth", q.leaf_depth},
              {"max_evals", q.quad.max_evals},
              {"plateau_depth", q.plateau_depth}};
}

// Non-finite numbers have no JSON literal; they are written as strings.
json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json check_json(const CheckResult& c, bool timing) {
  json residuals = json::object();
  for (const auto& [k, v] : c.residuals) residuals[k] = finite_or_string(v);
  json tolerances = json::object();
  for (const auto& [k, v] : c.tolerances) tolerances[k] = finite_or_string(v);
  json tables = json::array();
  for (const Table& t : c.tables) {
    json rows = json::array();
    for (const Table::Row& row : t.rows)
      rows.push_back(json::array({row.n, finite_or_string(row.value), finite_or_string(row.abs_error)}));
    tables.push_back(json{{"name", t.name}, {"columns", json::array({"n", "value", "abs_error"})}, {"rows", rows}});
  }
  json out{{"name", c.name},
           {"applicable", c.applicable},
           {"pass", c.pass},
           {"tolerance", finite_or_string(c.tolerance)},
           {"residuals", residuals},
           {"tolerances", tolerances},
           {"details", c.details},
           {"tables", tables}};
  if (timing) out["seconds"] = c.seconds;
  return out;
}

}  // namespace

Report run_report(const Scenario& sc, const RunOptions& opt) {
  Report r;
  r.scenario = sc.name;
  r.seed = opt.seed.value_or(sc.seed);
  r.environment = environment_json(sc);
  r.checks = run_checks(sc, opt);
  for (const CheckResult& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

json report_json(const Report& r, bool timing) {
  json checks = json::array();
  for (const CheckResult& c : r.checks) checks.push_back(check_json(c, timing));
  return json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"scenario", r.scenario},
              {"seed", r.seed},
              {"environment", r.environment},
              {"checks", checks},
              {"pass", r.pass}};
}

json suite_json(const std::vector<Report>& reports, bool timing) {
  json scenarios = json::array();
  bool pass = true;
  for (const Report& r : reports) {
    json j = report_json(r, timing);
    j.erase("schema_version");
    j.erase("tool_version");
    if (!r.source.empty()) j["source"] = r.source;
    scenarios.push_back(std::move(j));
    pass = pass && r.pass;
  }
  return json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"suite", true},
              {"scenarios", scenarios},
              {"pass", pass}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string table_csv(const Table& t) {
  std::string s = "n,value,abs_error\n";
  for (const Table::Row& r : t.rows)
    s += format_double(r.n) + "," + format_double(r.value) + "," + format_double(r.abs_error) + "\n";
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

std::vector<std::string> write_csv_tables(const Report& r, const std::string& dir) {
  std::vector<std::string> paths;
  for (const CheckResult& c : r.checks)
    for (const Table& t : c.tables) {
      const std::string path = (std::filesystem::path(dir) / (r.scenario + "_" + c.name + "_" + t.name + ".csv")).string();
      write_text(path, table_csv(t));
      paths.push_back(path);
    }
  return paths;
}

}  // namespace bvpair
