// Scenario runner.
//
//   bvpair run <file> [--only a,b] [--tol-scale k] [--report path] [--csv dir]
//                     [--seed n] [--jobs n] [--strict] [--timing]
//   bvpair suite [--dir d] [same flags as run, without --only]
//   bvpair normalize <file>
//   bvpair checks
//
// Exit status: 0 when every check passes, 2 when a check fails, 1 on parse,
// validation or usage errors.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvpair/error.hpp"
#include "bvpair/report.hpp"
#include "bvpair/scenario.hpp"
#include "bvpair/verify.hpp"

#ifndef BVPAIR_SCENARIO_DIR
#define BVPAIR_SCENARIO_DIR "scenarios"
#endif

namespace {

using namespace bvpair;

struct Flags {
  std::vector<std::string> only;
  double tol_scale = 1.0;
  std::string report;
  std::string csv;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool strict = false;
  bool timing = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tol-scale", f.tol_scale, "Multiply every tolerance by k")->check(CLI::PositiveNumber);
  cmd->add_option("--report", f.report, "Write the JSON report here ('-' for stdout)");
  cmd->add_option("--csv", f.csv, "Directory for CSV convergence tables");
  cmd->add_option("--seed", f.seed, "Override the scenario seed");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", f.strict, "Reject unknown keys in scenario files");
  cmd->add_flag("--timing", f.timing, "Include wall times in the report");
  cmd->add_flag("-q,--quiet", f.quiet, "No summary on stdout");
}

void print_summary(const Report& r, std::ostream& os) {
  os << r.scenario << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
  for (const CheckResult& c : r.checks) {
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name;
    if (!c.applicable) os << " (not applicable)";
    os << "\n";
    if (c.pass) continue;
    for (const auto& [k, v] : c.residuals) {
      const double tol = c.tolerances.at(k);
      if (!(v <= tol)) os << "        " << k << " = " << format_double(v) << " > " << format_double(tol) << "\n";
    }
    if (c.details.contains("error")) os << "        error: " << c.details["error"].get<std::string>() << "\n";
  }
}

void validate_only(const std::vector<std::string>& only) {
  const auto& names = check_names();
  for (const std::string& n : only)
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw Error(ErrorCode::ValidationError, "unknown check '" + n + "'");
}

RunOptions run_options(const Flags& f) {
  RunOptions o;
  o.only = f.only;
  o.tol_scale = f.tol_scale;
  o.seed = f.seed;
  o.jobs = f.jobs;
  return o;
}

void emit(const nlohmann::json& j, const std::string& path) {
  if (path == "-")
    std::cout << dump_json(j);
  else if (!path.empty())
    write_text(path, dump_json(j));
}

int cmd_run(const std::string& file, Flags f) {
  validate_only(f.only);
  Scenario sc = parse_scenario(file, f.strict);
  build_scenario(sc);
  if (f.report.empty() && sc.output_report) f.report = *sc.output_report;
  if (f.csv.empty() && sc.output_csv) f.csv = *sc.output_csv;
  Report r = run_report(sc, run_options(f));
  r.source = file;
  for (const std::string& w : sc.warnings) std::cerr << "warning: " << w << "\n";
  emit(report_json(r, f.timing), f.report);
  if (!f.csv.empty()) write_csv_tables(r, f.csv);
  if (!f.quiet && f.report != "-") print_summary(r, std::cout);
  return r.pass ? 0 : 2;
}

int cmd_suite(const std::string& dir, const Flags& f) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".toml") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::ValidationError, "no scenario files in " + dir);
  std::vector<Report> reports;
  for (const std::string& file : files) {
    Scenario sc = parse_scenario(file, f.strict);
    build_scenario(sc);
    Report r = run_report(sc, run_options(f));
    r.source = std::filesystem::path(file).filename().string();
    if (!f.csv.empty()) write_csv_tables(r, f.csv);
    if (!f.quiet && f.report != "-") print_summary(r, std::cout);
    reports.push_back(std::move(r));
  }
  const nlohmann::json j = suite_json(reports, f.timing);
  emit(j, f.report);
  return j["pass"].get<bool>() ? 0 : 2;
}

int cmd_normalize(const std::string& file, bool strict) {
  Scenario sc = parse_scenario(file, strict);
  build_scenario(sc);
  std::cout << to_toml(sc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear pairings between divergence-measure fields and BV functions on an interval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bvpair::kToolVersion);

  Flags run_flags, suite_flags;
  std::string run_file, norm_file, suite_dir = BVPAIR_SCENARIO_DIR;
  bool norm_strict = false;

  CLI::App* run = app.add_subcommand("run", "Run the checks of one scenario");
  run->add_option("file", run_file, "Scenario TOML file")->required();
  run->add_option("--only", run_flags.only, "Comma-separated check names")->delimiter(',');
  add_common(run, run_flags);

  CLI::App* suite = app.add_subcommand("suite", "Run every scenario in a directory and aggregate one report");
  suite->add_option("--dir", suite_dir, "Scenario directory");
  add_common(suite, suite_flags);

  CLI::App* norm = app.add_subcommand("normalize", "Print the normalized TOML form of a scenario");
  norm->add_option("file", norm_file, "Scenario TOML file")->required();
  norm->add_flag("--strict", norm_strict, "Reject unknown keys");

  CLI::App* list = app.add_subcommand("checks", "List check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(run_file, run_flags);
    if (*suite) return cmd_suite(suite_dir, suite_flags);
    if (*norm) return cmd_normalize(norm_file, norm_strict);
    if (*list) {
      for (const std::string& n : bvpair::check_names()) std::cout << n << "\n";
      return 0;
    }
  } catch (const bvpair::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
