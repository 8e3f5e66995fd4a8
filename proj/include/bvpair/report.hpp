#pragma once

// Machine-readable output: JSON reports (sorted keys, shortest round-trip
// floats) and CSV convergence tables.

#include <cstdint>
#include <string>
#include <vector>

#include "bvpair/scenario.hpp"
#include "bvpair/verify.hpp"
#include "json.hpp"

namespace bvpair {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct Report {
  std::string scenario;
  std::string source;  // scenario file as given on the command line
  std::uint64_t seed = 0;
  nlohmann::json environment = nlohmann::json::object();
  std::vector<CheckResult> checks;
  bool pass = true;
};

// Runs the selected checks of a built scenario.
Report run_report(const Scenario& sc, const RunOptions& opt);

// Wall times are left out unless `timing` is set, so that reports of
// identical runs compare byte for byte.
nlohmann::json report_json(const Report& r, bool timing = false);
nlohmann::json suite_json(const std::vector<Report>& reports, bool timing = false);

// Two-space indented JSON followed by a newline.
std::string dump_json(const nlohmann::json& j);

// One file per table: <dir>/<scenario>_<check>_<table>.csv with header
// n,value,abs_error. Returns the paths written.
std::vector<std::string> write_csv_tables(const Report& r, const std::string& dir);
std::string table_csv(const Table& t);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& text);

}  // namespace bvpair
