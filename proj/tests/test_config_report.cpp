#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pshlab/experiments.hpp"

using namespace pshlab;
namespace fs = std::filesystem;

namespace {
const fs::path kConfigs = fs::path(PSHLAB_SOURCE_DIR) / "configs";

std::string field_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

const std::string kHartogs = R"(name: h
experiment: nakano
family: {kind: hartogs_disk, radius: 1.0}
weight: {kind: zero}
degree: 0
grid: {half_width: 0.5, resolution: 3}
)";
}  // namespace

TEST(Config, BuiltinsParse) {
  ASSERT_FALSE(builtin_experiments().empty());
  for (const auto& b : builtin_experiments()) {
    const ExperimentConfig c = parse_config(b.yaml);
    EXPECT_EQ(c.name, b.name);
    EXPECT_EQ(find_builtin(b.name), &b);
  }
  EXPECT_EQ(find_builtin("no_such_experiment"), nullptr);
}

TEST(Config, ShippedConfigsMatchBuiltins) {
  for (const auto& b : builtin_experiments()) {
    const fs::path p = kConfigs / (b.name + ".yaml");
    ASSERT_TRUE(fs::exists(p)) << p;
    EXPECT_EQ(to_json(load_config(p.string())).dump(), to_json(parse_config(b.yaml)).dump()) << b.name;
  }
  EXPECT_NO_THROW(load_config((kConfigs / "nakano_circular.yaml").string()));
}

TEST(Config, MissingRadiusNamesTheField) {
  try {
    load_config((kConfigs / "malformed_missing_radius.yaml").string());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "family.radius");
  }
}

TEST(Config, SlidingConvexFamilyRejected) {
  try {
    load_config((kConfigs / "brunn_minkowski_sliding_rejected.yaml").string());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("strictly convex"), std::string::npos);
  }
}

TEST(Config, FieldLevelErrors) {
  EXPECT_EQ(field_of(kHartogs + "bogus: 1\n"), "bogus");
  EXPECT_EQ(field_of("experiment: nakano\n"), "family");
  EXPECT_EQ(field_of("family: {kind: product, radius: 1}\n"), "experiment");
  EXPECT_EQ(field_of(kHartogs + "schema: other/2\n"), "schema");
  EXPECT_EQ(field_of("experiment: [1\n"), "<document>");
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
  EXPECT_THROW(parse_config(R"(experiment: nakano
family: {kind: hartogs_disk, radius: 1.0}
grid: {resolution: 0}
)"),
               ConfigError);
  EXPECT_THROW(parse_config(R"(experiment: nakano
family: {kind: moebius_strip, radius: 1.0}
)"),
               ConfigError);
}

TEST(Config, DefaultsAndDerivedQuantities) {
  const ExperimentConfig c = parse_config(kHartogs);
  EXPECT_EQ(c.schema, kConfigSchema);
  EXPECT_DOUBLE_EQ(c.fd().step, 1e-2);
  EXPECT_TRUE(c.fd().richardson);
  EXPECT_EQ(c.param_grid().nodes().size(), 9u);
  EXPECT_DOUBLE_EQ(c.regularization, 1e-6);
}

TEST(Report, RoundTripAndValidation) {
  const Report r = run_experiment(parse_config(kHartogs));
  const std::string text = to_json(r).dump(2);
  const Report back = parse_report(text);
  EXPECT_EQ(payload_json(back).dump(), payload_json(r).dump());
  EXPECT_EQ(back.rows.size(), 9u);
  EXPECT_EQ(back.columns, r.columns);

  Json broken = to_json(r);
  broken.erase("verdict");
  EXPECT_THROW(report_from_json(broken), ConfigError);
  broken = to_json(r);
  broken["schema"] = "pshlab.report/0";
  EXPECT_THROW(report_from_json(broken), ConfigError);
  broken = to_json(r);
  broken["table"]["rows"][0].push_back(1.0);
  EXPECT_THROW(report_from_json(broken), ConfigError);
  EXPECT_THROW(parse_report("{not json"), ConfigError);
}

TEST(Report, IdenticalConfigGivesIdenticalPayload) {
  const ExperimentConfig c = parse_config(kHartogs);
  const Report a = run_experiment(c), b = run_experiment(c);
  EXPECT_EQ(payload_json(a).dump(), payload_json(b).dump());
  EXPECT_EQ(table_tsv(a), table_tsv(b));
}

TEST(Report, WritesReportAndTableToOverrideDirectory) {
  const fs::path dir = fs::temp_directory_path() / "pshlab_test_reports";
  fs::remove_all(dir);
  ::setenv("PSHLAB_OUTPUT_DIR", dir.c_str(), 1);
  EXPECT_EQ(output_directory("configured"), dir);
  ::unsetenv("PSHLAB_OUTPUT_DIR");
  EXPECT_EQ(output_directory("configured"), fs::path("configured"));
  EXPECT_EQ(output_directory(""), fs::path("reports"));

  const Report r = run_experiment(parse_config(kHartogs));
  const WrittenReport w = write_report(r, dir);
  ASSERT_TRUE(fs::exists(w.report));
  ASSERT_TRUE(fs::exists(w.table));
  std::ifstream in(w.report);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(payload_json(parse_report(ss.str())).dump(), payload_json(r).dump());
  std::ifstream tin(w.table);
  std::string header;
  std::getline(tin, header);
  EXPECT_EQ(header.substr(0, 7), "t1_re\tt");
  fs::remove_all(dir);
}

TEST(RunExperiment, HartogsPasses) {
  const Report r = run_experiment(load_config((kConfigs / "nakano_hartogs.yaml").string()));
  EXPECT_EQ(r.verdict, "pass");
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.results["margin"].get<double>(), 2.0, 1e-3);
  EXPECT_EQ(r.rows.size(), 81u);
}

TEST(RunExperiment, ProductFamilyFailsStrictness) {
  const Report r = run_experiment(load_config((kConfigs / "product_flat.yaml").string()));
  EXPECT_EQ(r.verdict, "fail_strict");
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.results["margin"].get<double>(), 0.0, 1e-6);
}

TEST(RunExperiment, HugeEpsStrictFailsStrictness) {
  ExperimentConfig c = parse_config(kHartogs);
  c.eps_strict = 1e3;
  EXPECT_EQ(run_experiment(c).verdict, "fail_strict");
}

TEST(RunExperiment, WrongExpectedValueFailsExpected) {
  ExperimentConfig c = parse_config(kHartogs);
  c.expected = 3.0;
  const Report r = run_experiment(c);
  EXPECT_EQ(r.verdict, "fail_expected");
  EXPECT_FALSE(r.results["expected_pass"].get<bool>());
}

TEST(RunExperiment, EveryBuiltinProducesAValidReport) {
  for (const auto& b : builtin_experiments()) {
    const Report r = run_experiment(parse_config(b.yaml));
    EXPECT_NO_THROW(validate_report_json(to_json(r))) << b.name;
    EXPECT_FALSE(r.rows.empty()) << b.name;
    if (b.name != "product_flat") {
      EXPECT_TRUE(r.pass) << b.name << ": " << r.verdict;
    }
  }
}
