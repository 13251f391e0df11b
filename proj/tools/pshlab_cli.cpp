#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pshlab.hpp"

namespace {

using namespace pshlab;

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kNumeric = 3 };

struct CatalogEntry {
  std::string name;
  std::string section;
  std::string required;
  std::string optional;
  std::string oracle;
};

std::vector<CatalogEntry> catalog() {
  return {
      {"hartogs_disk", "family", "radius", "decay", hartogs_disk().oracle},
      {"shrinking_ball", "family", "radius", "m, decay", shrinking_ball().oracle},
      {"reinhardt_shadow", "family", "outer", "inner, decay, growth", reinhardt_shadow({0.0}, {1.0}).oracle},
      {"ellipsoid_reinhardt", "family", "axes", "decay", ellipsoid_reinhardt({1.0, 1.0}).oracle},
      {"tube", "family", "radius", "m, coupling", tube_family().oracle},
      {"product", "family", "radius", "m", product_family().oracle},
      {"circular_ellipsoid", "family", "coupling, radius", "decay", circular_ellipsoid(0.5).oracle},
      {"ball", "convex", "radius", "m0", "|D_t| = vol of the m0-ball of radius sqrt(R² − |t|²)"},
      {"interval", "convex", "radius", "", "|D_t| = 2R"},
      {"sliding", "convex", "velocity", "width", "rejected: defining function not strictly convex"},
      {"hermitian", "finsler", "diagonal", "offdiag, growth", "1/μ₀ = m!·det G(t)/πᵐ"},
      {"l1", "finsler", "", "weights, growth", "h = |z₁| + |z₂|: 1/μ₀ = 6/π²"},
  };
}

int list_families(bool json) {
  const auto cat = catalog();
  if (json) {
    Json out = Json::array();
    for (const auto& e : cat)
      out.push_back({{"name", e.name}, {"section", e.section}, {"required", e.required}, {"optional", e.optional},
                     {"oracle", e.oracle}});
    std::cout << out.dump(2) << '\n';
    return kPass;
  }
  for (const auto& e : cat) {
    std::cout << e.name << " [" << e.section << "]\n"
              << "  required: " << (e.required.empty() ? "-" : e.required) << "\n"
              << "  optional: " << (e.optional.empty() ? "-" : e.optional) << "\n"
              << "  oracle:   " << e.oracle << "\n";
  }
  std::cout << "\nbuilt-in experiments:\n";
  for (const auto& b : builtin_experiments()) std::cout << "  " << b.name << ": " << b.description << '\n';
  return kPass;
}

int run(const std::string& target, const std::string& out_dir) {
  ExperimentConfig cfg;
  if (std::filesystem::exists(target)) {
    cfg = load_config(target);
  } else if (const BuiltinExperiment* b = find_builtin(target)) {
    cfg = parse_config(b->yaml);
  } else {
    throw ConfigError("<file>", "no config file or built-in experiment named '" + target + "'");
  }
  const Report rep = run_experiment(cfg);
  const auto written = write_report(rep, output_directory(out_dir.empty() ? cfg.output : out_dir));
  std::cout << rep.name << ": " << rep.verdict;
  if (rep.results.contains("margin")) std::cout << " margin=" << rep.results["margin"].get<double>();
  if (rep.results.contains("eps_strict")) std::cout << " eps_strict=" << rep.results["eps_strict"].get<double>();
  std::cout << " (" << rep.wall_seconds << " s)\n"
            << "report: " << written.report.string() << "\ntable:  " << written.table.string() << '\n';
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
  return rep.pass ? kPass : kFail;
}

int verify_all(bool list, std::optional<double> eps, int order) {
  const auto& criteria = acceptance_criteria();
  if (list) {
    for (const auto& c : criteria) std::cout << "C" << c.id << "  " << c.title << '\n';
    return kPass;
  }
  AcceptanceOptions o;
  o.eps_strict = eps;
  o.quadrature_order = order;
  int failed = 0;
  for (const auto& c : criteria) {
    const CriterionResult r = run_criterion(c, o);
    std::cout << format_criterion(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? kFail : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pshlab: curvature and convexity experiments for fibered domain families"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config (file path or built-in name)");
  std::string target, out_dir;
  run_cmd->add_option("config", target, "YAML config path or built-in experiment name")->required();
  run_cmd->add_option("-o,--output-dir", out_dir, "Report directory (PSHLAB_OUTPUT_DIR takes precedence)");

  auto* verify_cmd = app.add_subcommand("verify-all", "Run the acceptance suite");
  bool list = false;
  std::optional<double> eps;
  int order = 64;
  verify_cmd->add_flag("--list", list, "List criteria without running them");
  verify_cmd->add_option("--eps-strict", eps, "Override the strictness threshold");
  verify_cmd->add_option("--quadrature-order", order, "Gauss-Legendre order")->check(CLI::Range(2, 4096));

  auto* fam_cmd = app.add_subcommand("list-families", "Print the built-in family catalog");
  bool json = false;
  fam_cmd->add_flag("--json", json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*run_cmd) return run(target, out_dir);
    if (*verify_cmd) return verify_all(list, eps, order);
    if (*fam_cmd) return list_families(json);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
  return kPass;
}
