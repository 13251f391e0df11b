#pragma once

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/corollaries.hpp"

namespace pshlab {

inline constexpr const char* kConfigSchema = "pshlab.config/1";

enum class ExperimentKind { nakano, character_psh, bergman, prekopa, brunn_minkowski, det_metric, curvature_bound, regmax_props };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::nakano: return "nakano";
    case ExperimentKind::character_psh: return "character_psh";
    case ExperimentKind::bergman: return "bergman";
    case ExperimentKind::prekopa: return "prekopa";
    case ExperimentKind::brunn_minkowski: return "brunn_minkowski";
    case ExperimentKind::det_metric: return "det_metric";
    case ExperimentKind::curvature_bound: return "curvature_bound";
    case ExperimentKind::regmax_props: return "regmax_props";
  }
  return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::nakano, ExperimentKind::character_psh, ExperimentKind::bergman, ExperimentKind::prekopa,
                 ExperimentKind::brunn_minkowski, ExperimentKind::det_metric, ExperimentKind::curvature_bound,
                 ExperimentKind::regmax_props})
    if (s == to_string(k)) return k;
  throw ConfigError("experiment", "unknown experiment kind '" + s + "'");
}

/// A kind tag plus named numeric parameters (scalars and lists).
struct ParamSpec {
  std::string kind;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> lists;

  bool has(const std::string& k) const { return scalars.count(k) > 0; }
  double get(const std::string& section, const std::string& k) const {
    auto it = scalars.find(k);
    if (it == scalars.end()) throw ConfigError(section + "." + k, "required field is missing");
    return it->second;
  }
  double get(const std::string& k, double fallback) const {
    auto it = scalars.find(k);
    return it == scalars.end() ? fallback : it->second;
  }
  const std::vector<double>& list(const std::string& section, const std::string& k) const {
    auto it = lists.find(k);
    if (it == lists.end()) throw ConfigError(section + "." + k, "required list is missing");
    return it->second;
  }
  std::vector<double> list_or(const std::string& k, std::vector<double> fallback) const {
    auto it = lists.find(k);
    return it == lists.end() ? fallback : it->second;
  }
};

struct GridConfig {
  int n = 1;
  double half_width = 0.5;
  int resolution = 9;
  bool real_only = false;
};

struct ExperimentConfig {
  std::string schema = kConfigSchema;
  std::string name = "experiment";
  ExperimentKind experiment = ExperimentKind::nakano;
  ParamSpec family;
  ParamSpec weight{"zero", {}, {}};
  int degree = 0;
  std::vector<int> alpha;
  GridConfig grid;
  std::optional<double> fd_step;  // absolute; default 1e-2 × box width
  bool richardson = true;
  QuadratureSpec quadrature;
  std::optional<double> eps_strict;
  double regularization = 1e-6;
  int k_max = -1;                  // bergman; default 30 (m=1) or 12 (m=2)
  std::vector<double> graph_z0;    // bergman graph ξ(t) = z0 + slope·t (real parts)
  std::vector<double> graph_slope;
  std::optional<double> expected;  // closed-form margin, if known
  double expected_tolerance = 1e-3;
  int samples = 1000;              // regmax_props
  std::uint64_t seed = 1;
  std::string output;

  FdScheme fd() const {
    return {fd_step.value_or(1e-2 * 2.0 * grid.half_width), richardson};
  }
  ParamBox box() const {
    return grid.real_only ? ParamBox::real_segment(grid.n, {-grid.half_width, grid.half_width})
                          : ParamBox::square(grid.n, grid.half_width);
  }
  ParamGrid param_grid() const { return {box(), grid.resolution}; }
  RealGrid real_grid() const {
    return {std::vector<Interval>(static_cast<std::size_t>(grid.n), Interval{-grid.half_width, grid.half_width}),
            grid.resolution};
  }
};

namespace detail {

inline ParamSpec parse_param_spec(const YAML::Node& node, const std::string& section) {
  if (!node || !node.IsMap()) throw ConfigError(section, "expected a mapping");
  ParamSpec p;
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    try {
      if (key == "kind") {
        p.kind = v.as<std::string>();
      } else if (v.IsSequence()) {
        std::vector<double> xs;
        for (const auto& e : v) xs.push_back(e.as<double>());
        p.lists[key] = xs;
      } else if (v.IsScalar()) {
        p.scalars[key] = v.as<double>();
      } else {
        throw ConfigError(section + "." + key, "expected a number or a list of numbers");
      }
    } catch (const YAML::Exception&) {
      throw ConfigError(section + "." + key, "expected a number or a list of numbers");
    }
  }
  if (p.kind.empty()) throw ConfigError(section + ".kind", "required field is missing");
  return p;
}

template <class T>
T scalar(const YAML::Node& n, const std::string& field) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

inline void positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive and finite");
}

}  // namespace detail

inline void validate_config(const ExperimentConfig& c);

/// Parses a YAML document into an ExperimentConfig and validates it.
inline ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", std::string("YAML parse error: ") + e.what());
  }
  if (!root || !root.IsMap()) throw ConfigError("<document>", "expected a mapping at top level");
  static const std::vector<std::string> known = {"schema", "name",   "experiment", "family",     "weight",  "degree",
                                                 "alpha",  "grid",   "fd",         "quadrature", "tolerances", "bergman",
                                                 "expected", "samples", "seed",    "output",     "convex",  "finsler"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");
  }
  ExperimentConfig c;
  if (root["schema"]) {
    c.schema = detail::scalar<std::string>(root["schema"], "schema");
    if (c.schema != kConfigSchema) throw ConfigError("schema", "unsupported schema '" + c.schema + "'");
  }
  if (root["name"]) c.name = detail::scalar<std::string>(root["name"], "name");
  if (!root["experiment"]) throw ConfigError("experiment", "required field is missing");
  c.experiment = experiment_from_string(detail::scalar<std::string>(root["experiment"], "experiment"));
  // Family description: complex families under `family`, real convex families
  // under `convex`, Finsler metrics under `finsler`.
  for (const char* sec : {"family", "convex", "finsler"})
    if (root[sec]) c.family = detail::parse_param_spec(root[sec], sec);
  if (c.experiment != ExperimentKind::regmax_props && c.family.kind.empty())
    throw ConfigError("family", "required section is missing");
  if (root["weight"]) c.weight = detail::parse_param_spec(root["weight"], "weight");
  if (root["degree"]) c.degree = detail::scalar<int>(root["degree"], "degree");
  if (root["alpha"]) {
    if (!root["alpha"].IsSequence()) throw ConfigError("alpha", "expected a list of integers");
    for (const auto& e : root["alpha"]) c.alpha.push_back(detail::scalar<int>(e, "alpha"));
  }
  if (const auto g = root["grid"]) {
    if (g["n"]) c.grid.n = detail::scalar<int>(g["n"], "grid.n");
    if (g["half_width"]) c.grid.half_width = detail::scalar<double>(g["half_width"], "grid.half_width");
    if (g["resolution"]) c.grid.resolution = detail::scalar<int>(g["resolution"], "grid.resolution");
    if (g["real_only"]) c.grid.real_only = detail::scalar<bool>(g["real_only"], "grid.real_only");
  }
  if (const auto f = root["fd"]) {
    if (f["step"]) c.fd_step = detail::scalar<double>(f["step"], "fd.step");
    if (f["richardson"]) c.richardson = detail::scalar<bool>(f["richardson"], "fd.richardson");
  }
  if (const auto q = root["quadrature"]) {
    if (q["order"]) c.quadrature.order = detail::scalar<int>(q["order"], "quadrature.order");
    if (q["angular_order"]) c.quadrature.angular_order = detail::scalar<int>(q["angular_order"], "quadrature.angular_order");
    if (q["refine"]) c.quadrature.refine = detail::scalar<bool>(q["refine"], "quadrature.refine");
    if (q["tolerance"]) c.quadrature.tolerance = detail::scalar<double>(q["tolerance"], "quadrature.tolerance");
  }
  if (const auto t = root["tolerances"]) {
    if (t["eps_strict"]) c.eps_strict = detail::scalar<double>(t["eps_strict"], "tolerances.eps_strict");
    if (t["regularization"]) c.regularization = detail::scalar<double>(t["regularization"], "tolerances.regularization");
    if (t["expected"]) c.expected_tolerance = detail::scalar<double>(t["expected"], "tolerances.expected");
  }
  if (const auto b = root["bergman"]) {
    if (b["k_max"]) c.k_max = detail::scalar<int>(b["k_max"], "bergman.k_max");
    if (b["graph_z0"])
      for (const auto& e : b["graph_z0"]) c.graph_z0.push_back(detail::scalar<double>(e, "bergman.graph_z0"));
    if (b["graph_slope"])
      for (const auto& e : b["graph_slope"]) c.graph_slope.push_back(detail::scalar<double>(e, "bergman.graph_slope"));
  }
  if (root["expected"]) c.expected = detail::scalar<double>(root["expected"], "expected");
  if (root["samples"]) c.samples = detail::scalar<int>(root["samples"], "samples");
  if (root["seed"]) c.seed = detail::scalar<std::uint64_t>(root["seed"], "seed");
  if (root["output"]) c.output = detail::scalar<std::string>(root["output"], "output");
  try {
    validate_config(c);
  } catch (const DomainError& e) {
    throw ConfigError(c.family.kind.empty() ? "experiment" : "family", e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Builders

inline DomainFamily build_family(const ParamSpec& p, const ParamBox& box) {
  const std::string s = "family";
  const std::string& k = p.kind;
  if (k == "hartogs_disk") return hartogs_disk(p.get(s, "radius"), p.get("decay", 1.0), box);
  if (k == "shrinking_ball")
    return shrinking_ball(static_cast<int>(p.get("m", 2)), p.get(s, "radius"), p.get("decay", 1.0), box);
  if (k == "reinhardt_shadow") {
    const auto outer = p.list(s, "outer");
    const auto inner = p.list_or("inner", std::vector<double>(outer.size(), 0.0));
    if (inner.size() != outer.size()) throw ConfigError("family.inner", "length differs from family.outer");
    return reinhardt_shadow(inner, outer, p.get("decay", 1.0), p.get("growth", 0.0), box);
  }
  if (k == "ellipsoid_reinhardt") return ellipsoid_reinhardt(p.list(s, "axes"), p.get("decay", 1.0), box);
  if (k == "tube")
    return tube_family(static_cast<int>(p.get("m", 1)), p.get(s, "radius"), p.get("coupling", 0.0), box);
  if (k == "product") return product_family(static_cast<int>(p.get("m", 1)), p.get(s, "radius"), box);
  if (k == "circular_ellipsoid")
    return circular_ellipsoid(p.get(s, "coupling"), p.get(s, "radius"), p.get("decay", 1.0), box);
  throw ConfigError("family.kind", "unknown family kind '" + k + "'");
}

inline WeightField build_weight(const ParamSpec& p, int m) {
  const std::string s = "weight";
  if (p.kind == "zero") return WeightField::zero();
  if (p.kind == "quadratic") {
    auto b = p.list_or("b_z", {p.get("b", 0.0)});
    if (b.empty()) throw ConfigError("weight.b_z", "must not be empty");
    if (static_cast<int>(b.size()) != 1 && static_cast<int>(b.size()) != m)
      throw ConfigError("weight.b_z", "length must be 1 or m");
    return WeightField::quadratic(p.get("a_t", 0.0), b);
  }
  if (p.kind == "coupled") return WeightField::coupled(p.get("c", 1.0));
  if (p.kind == "tube_polynomial") return WeightField::tube_polynomial(p.get("a_t", 0.0), p.get("b_x", 0.0), p.get("c_x", 0.0));
  (void)s;
  throw ConfigError("weight.kind", "unknown weight kind '" + p.kind + "'");
}

inline ConvexFamily build_convex(const ParamSpec& p, const GridConfig& g) {
  const std::string s = "convex";
  const Interval box{-g.half_width, g.half_width};
  if (p.kind == "ball") return convex_ball(static_cast<int>(p.get("m0", 1)), p.get(s, "radius"), box);
  if (p.kind == "interval") return convex_interval(p.get(s, "radius"), box);
  if (p.kind == "sliding") return sliding_interval(p.get(s, "velocity"), p.get("width", 2.0), box);
  throw ConfigError("convex.kind", "unknown convex family kind '" + p.kind + "'");
}

/// Real weight a|t|² + b|x|² + c Σx.
inline RealWeight build_real_weight(const ParamSpec& p) {
  if (p.kind == "zero") return [](const RVec&, const RVec&) { return 0.0; };
  if (p.kind == "quadratic" || p.kind == "tube_polynomial") {
    const double a = p.get("a_t", 0.0), b = p.get("b_x", p.get("b", 0.0)), c = p.get("c_x", 0.0);
    return [a, b, c](const RVec& t, const RVec& x) { return a * t.squaredNorm() + b * x.squaredNorm() + c * x.sum(); };
  }
  throw ConfigError("weight.kind", "unsupported weight kind '" + p.kind + "' for a convex family");
}

inline FinslerMetric build_finsler(const ParamSpec& p) {
  const std::string s = "finsler";
  const double growth = p.get("growth", 0.0);
  if (p.kind == "hermitian") {
    const auto diag = p.list(s, "diagonal");
    if (diag.empty() || diag.size() > 2) throw ConfigError("finsler.diagonal", "rank must be 1 or 2");
    CMat g = CMat::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
      detail::positive(diag[i], "finsler.diagonal");
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    }
    if (diag.size() == 2) g(0, 1) = g(1, 0) = p.get("offdiag", 0.0);
    if (min_eigenvalue(g) <= 0.0) throw ConfigError("finsler.offdiag", "matrix is not positive definite");
    return hermitian_finsler(g, growth);
  }
  if (p.kind == "l1") {
    const auto w = p.list_or("weights", {1.0, 1.0});
    for (double x : w) detail::positive(x, "finsler.weights");
    if (w.size() > 2) throw ConfigError("finsler.weights", "rank must be 1 or 2");
    return l1_finsler(w, growth);
  }
  throw ConfigError("finsler.kind", "unknown Finsler metric kind '" + p.kind + "'");
}

inline bool uses_convex(const ExperimentConfig& c) {
  return c.experiment == ExperimentKind::brunn_minkowski ||
         (c.experiment == ExperimentKind::prekopa &&
          (c.family.kind == "ball" || c.family.kind == "interval" || c.family.kind == "sliding"));
}

/// Structural validation plus the hypothesis spot checks each experiment
/// relies on. Every failure is a ConfigError naming the offending field.
inline void validate_config(const ExperimentConfig& c) {
  if (c.grid.n < 1) throw ConfigError("grid.n", "must be ≥ 1");
  if (c.grid.resolution < 1) throw ConfigError("grid.resolution", "must be ≥ 1");
  detail::positive(c.grid.half_width, "grid.half_width");
  if (c.fd_step) detail::positive(*c.fd_step, "fd.step");
  if (c.quadrature.order < 2) throw ConfigError("quadrature.order", "must be ≥ 2");
  if (c.quadrature.angular_order < 2) throw ConfigError("quadrature.angular_order", "must be ≥ 2");
  if (c.degree < 0) throw ConfigError("degree", "must be ≥ 0");
  if (c.eps_strict && !(std::isfinite(*c.eps_strict))) throw ConfigError("tolerances.eps_strict", "must be finite");
  if (c.samples < 1) throw ConfigError("samples", "must be ≥ 1");
  switch (c.experiment) {
    case ExperimentKind::regmax_props: return;
    case ExperimentKind::det_metric: {
      const FinslerMetric f = build_finsler(c.family);
      if (finsler_homogeneity_residual(f, c.box(), 50) > 1e-9)
        throw ConfigError("finsler", "metric is not 1-homogeneous");
      return;
    }
    default: break;
  }
  if (uses_convex(c)) {
    const ConvexFamily f = build_convex(c.family, c.grid);
    validate_convex_family(f);
    build_real_weight(c.weight);
    return;
  }
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  validate_family(f, 200);
  if (!w.respects(f.symmetry) && c.experiment != ExperimentKind::curvature_bound)
    throw ConfigError("weight.kind", std::string("weight does not respect the family's ") + to_string(f.symmetry) +
                                         " symmetry");
  if (c.experiment == ExperimentKind::character_psh) {
    if (static_cast<int>(c.alpha.size()) != f.m) throw ConfigError("alpha", "length must equal the fiber dimension m");
  }
  if (c.experiment == ExperimentKind::curvature_bound && f.kind != FamilyKind::product)
    throw ConfigError("family.kind", "curvature_bound requires a product family");
  if ((c.experiment == ExperimentKind::nakano || c.experiment == ExperimentKind::bergman) && f.is_tube())
    throw ConfigError("family.kind", "tube fibers carry no holomorphic polynomial metric here");
  if (c.experiment == ExperimentKind::bergman) {
    if (!c.graph_z0.empty() && static_cast<int>(c.graph_z0.size()) != f.m)
      throw ConfigError("bergman.graph_z0", "length must equal m");
    if (!c.graph_slope.empty() && static_cast<int>(c.graph_slope.size()) != f.m * f.n)
      throw ConfigError("bergman.graph_slope", "length must equal m·n");
  }
  // Plurisubharmonicity of the weight, spot-checked at a few points.
  std::mt19937_64 rng(c.seed);
  std::vector<std::pair<CVec, CVec>> pts;
  for (int s = 0; s < 8; ++s) {
    CVec t = detail::random_param(f.param_box, rng);
    CVec z = detail::random_fiber(f.m, f.is_tube() ? 0.5 : 0.25 * f.z_bound, rng);
    pts.emplace_back(t, z);
  }
  if (!f.is_tube()) {
    ScalarField phi = [&](const CVec& t, const CVec& z) { return w(t, z); };
    const PshCheck chk = check_psh_hypothesis(phi, pts, false, {1e-3, true});
    if (!chk.pass) throw ConfigError("weight", "weight is not plurisubharmonic on samples (min eigenvalue " +
                                                   std::to_string(chk.margin) + ")");
  }
}

}  // namespace pshlab
