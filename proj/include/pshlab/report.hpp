#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pshlab/config.hpp"

namespace pshlab {

inline constexpr const char* kReportSchema = "pshlab.report/1";

using Json = nlohmann::ordered_json;

/// Result of one experiment run. Everything except `wall_seconds` is the
/// numeric payload and is reproducible for a fixed config.
struct Report {
  std::string schema = kReportSchema;
  std::string name;
  std::string experiment;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string verdict = "fail";
  bool pass = false;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  void add_warning(const std::string& w) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  }
};

inline Json to_json(const ParamSpec& p) {
  Json j = Json::object();
  j["kind"] = p.kind;
  for (const auto& [k, v] : p.scalars) j[k] = v;
  for (const auto& [k, v] : p.lists) j[k] = v;
  return j;
}

inline Json to_json(const ExperimentConfig& c) {
  Json j = Json::object();
  j["schema"] = c.schema;
  j["name"] = c.name;
  j["experiment"] = to_string(c.experiment);
  j["family"] = to_json(c.family);
  j["weight"] = to_json(c.weight);
  j["degree"] = c.degree;
  j["alpha"] = c.alpha;
  j["grid"] = {{"n", c.grid.n}, {"half_width", c.grid.half_width}, {"resolution", c.grid.resolution},
               {"real_only", c.grid.real_only}};
  j["fd"] = {{"step", c.fd().step}, {"richardson", c.richardson}};
  j["quadrature"] = {{"order", c.quadrature.order},
                     {"angular_order", c.quadrature.angular_order},
                     {"refine", c.quadrature.refine},
                     {"tolerance", c.quadrature.tolerance}};
  j["tolerances"] = {{"eps_strict", c.eps_strict ? Json(*c.eps_strict) : Json(nullptr)},
                     {"regularization", c.regularization},
                     {"expected", c.expected_tolerance}};
  j["bergman"] = {{"k_max", c.k_max}, {"graph_z0", c.graph_z0}, {"graph_slope", c.graph_slope}};
  j["expected"] = c.expected ? Json(*c.expected) : Json(nullptr);
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  return j;
}

/// Numeric payload only (no timing).
inline Json payload_json(const Report& r) {
  Json j = Json::object();
  j["schema"] = r.schema;
  j["name"] = r.name;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  j["results"] = r.results;
  j["table"] = {{"columns", r.columns}, {"rows", r.rows}};
  j["verdict"] = r.verdict;
  j["pass"] = r.pass;
  j["warnings"] = r.warnings;
  return j;
}

inline Json to_json(const Report& r) {
  Json j = payload_json(r);
  j["timing"] = {{"wall_seconds", r.wall_seconds}};
  return j;
}

/// Checks the structure of a serialized report; throws ConfigError naming the
/// first offending field.
inline void validate_report_json(const Json& j) {
  auto need = [&](const char* k, auto pred, const char* what) {
    if (!j.contains(k) || !pred(j[k])) throw ConfigError(std::string("report.") + k, what);
  };
  need("schema", [](const Json& v) { return v.is_string() && v.get<std::string>() == kReportSchema; },
       "missing or unsupported schema tag");
  need("name", [](const Json& v) { return v.is_string(); }, "must be a string");
  need("experiment", [](const Json& v) { return v.is_string(); }, "must be a string");
  need("config", [](const Json& v) { return v.is_object(); }, "must be an object");
  need("results", [](const Json& v) { return v.is_object(); }, "must be an object");
  need("verdict", [](const Json& v) { return v.is_string(); }, "must be a string");
  need("pass", [](const Json& v) { return v.is_boolean(); }, "must be a boolean");
  need("warnings", [](const Json& v) { return v.is_array(); }, "must be an array");
  need("table", [](const Json& v) { return v.is_object() && v.contains("columns") && v.contains("rows"); },
       "must hold columns and rows");
  const std::size_t width = j["table"]["columns"].size();
  for (const auto& row : j["table"]["rows"])
    if (!row.is_array() || row.size() != width) throw ConfigError("report.table.rows", "row width differs from columns");
  experiment_from_string(j["experiment"].get<std::string>());
}

inline Report report_from_json(const Json& j) {
  validate_report_json(j);
  Report r;
  r.schema = j["schema"].get<std::string>();
  r.name = j["name"].get<std::string>();
  r.experiment = j["experiment"].get<std::string>();
  r.config = j["config"];
  r.results = j["results"];
  r.columns = j["table"]["columns"].get<std::vector<std::string>>();
  for (const auto& row : j["table"]["rows"]) {
    std::vector<double> v;
    for (const auto& x : row) v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
    r.rows.push_back(std::move(v));
  }
  r.verdict = j["verdict"].get<std::string>();
  r.pass = j["pass"].get<bool>();
  r.warnings = j["warnings"].get<std::vector<std::string>>();
  if (j.contains("timing")) r.wall_seconds = j["timing"].value("wall_seconds", 0.0);
  return r;
}

inline Report parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("report", std::string("JSON parse error: ") + e.what());
  }
  return report_from_json(j);
}

/// Tab-separated per-grid-point table with full round-trip precision.
inline std::string table_tsv(const Report& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "\t" : "") << r.columns[c];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "\t" : "") << row[c];
    os << '\n';
  }
  return os.str();
}

/// Output directory: PSHLAB_OUTPUT_DIR if set, else the config's output
/// field, else ./reports.
inline std::filesystem::path output_directory(const std::string& configured) {
  if (const char* env = std::getenv("PSHLAB_OUTPUT_DIR"); env && *env) return env;
  if (!configured.empty()) return configured;
  return "reports";
}

struct WrittenReport {
  std::filesystem::path report;
  std::filesystem::path table;
};

inline WrittenReport write_report(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WrittenReport out{dir / (r.name + ".report.json"), dir / (r.name + ".table.tsv")};
  {
    std::ofstream f(out.report);
    if (!f) throw std::runtime_error("cannot write " + out.report.string());
    f << to_json(r).dump(2) << '\n';
  }
  {
    std::ofstream f(out.table);
    if (!f) throw std::runtime_error("cannot write " + out.table.string());
    f << table_tsv(r);
  }
  return out;
}

}  // namespace pshlab
