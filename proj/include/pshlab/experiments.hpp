#pragma once

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "pshlab/bergman.hpp"
#include "pshlab/curvature.hpp"
#include "pshlab/report.hpp"

namespace pshlab {

namespace detail {

inline std::vector<std::string> t_columns(int n) {
  std::vector<std::string> c;
  for (int j = 1; j <= n; ++j) c.push_back("t" + std::to_string(j) + "_re");
  for (int j = 1; j <= n; ++j) c.push_back("t" + std::to_string(j) + "_im");
  return c;
}

inline std::vector<double> t_row(const CVec& t) {
  std::vector<double> r;
  for (Eigen::Index j = 0; j < t.size(); ++j) r.push_back(t(j).real());
  for (Eigen::Index j = 0; j < t.size(); ++j) r.push_back(t(j).imag());
  return r;
}

struct Nodewise {
  double margin = std::numeric_limits<double>::infinity();
  double error = 0.0;
};

// Per-node value and smallest complex Hessian eigenvalue of `f`.
inline Nodewise nodewise_psh(const PointField& f, const std::vector<CVec>& nodes, const FdScheme& fd, Report& rep,
                             const char* value_name) {
  rep.columns = t_columns(nodes.empty() ? 1 : static_cast<int>(nodes.front().size()));
  for (const char* c : {value_name, "hessian_min_eigenvalue", "error_estimate"}) rep.columns.push_back(c);
  Nodewise out;
  for (const CVec& t : nodes) {
    const double v = f(t);
    const FdHessianResult h = complex_hessian_fd(f, t, fd);
    const double e = min_eigenvalue(h.hessian.full);
    out.margin = std::min(out.margin, e);
    out.error = std::max(out.error, h.error_estimate);
    auto row = t_row(t);
    row.insert(row.end(), {v, e, h.error_estimate});
    rep.rows.push_back(std::move(row));
  }
  return out;
}

inline void strict_verdict(const ExperimentConfig& c, Report& rep, double margin, double error) {
  const double eps = c.eps_strict.value_or(10.0 * error);
  const bool strict = margin > eps;
  rep.results["margin"] = margin;
  rep.results["error_estimate"] = error;
  rep.results["eps_strict"] = eps;
  rep.results["strict_pass"] = strict;
  bool expected_ok = true;
  if (c.expected) {
    const double dev = std::abs(margin - *c.expected);
    expected_ok = dev <= c.expected_tolerance;
    rep.results["expected"] = *c.expected;
    rep.results["expected_deviation"] = dev;
    rep.results["expected_pass"] = expected_ok;
  }
  rep.pass = strict && expected_ok;
  rep.verdict = rep.pass ? "pass" : (!strict ? "fail_strict" : "fail_expected");
}

inline void run_nakano(const ExperimentConfig& c, Report& rep) {
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  const GramField field = gram_field(f, w, c.degree, c.param_grid(), c.quadrature, c.fd());
  const CurvatureReport cr = certify_field(field, c.eps_strict);
  rep.columns = t_columns(f.n);
  for (const char* col : {"min_eigenvalue", "max_eigenvalue", "error_estimate", "condition", "weight_min_eigenvalue"})
    rep.columns.push_back(col);
  Json spectra = Json::array();
  double weight_max = -std::numeric_limits<double>::infinity();
  for (const NodeCurvature& nc : cr.nodes) {
    const double wmin = min_eigenvalue(weight_hessian(w, nc.t, CVec::Zero(f.m)).full);
    weight_max = std::max(weight_max, wmin);
    auto row = t_row(nc.t);
    row.insert(row.end(), {nc.min_eigenvalue, nc.spectrum.maxCoeff(), nc.error_estimate, nc.condition, wmin});
    rep.rows.push_back(std::move(row));
    spectra.push_back(std::vector<double>(nc.spectrum.data(), nc.spectrum.data() + nc.spectrum.size()));
  }
  rep.results["rank"] = cr.rank;
  rep.results["convention"] = cr.convention;
  rep.results["spectra"] = spectra;
  rep.results["weight_hessian_margin_max"] = weight_max;
  if (cr.conditioning_warning) rep.add_warning("conditioning: Gram matrix condition number above 1e12");
  if (cr.accuracy_warning) rep.add_warning("accuracy: quadrature refinement above tolerance");
  strict_verdict(c, rep, cr.margin, cr.error_estimate);
}

inline void run_character_psh(const ExperimentConfig& c, Report& rep) {
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  const MultiIndex alpha(c.alpha);
  double quad_err = 0.0;
  PointField psi = [&](const CVec& t) {
    const LogMetricResult r = character_log_metric(f, w, alpha, ParamPoint(t), c.quadrature);
    quad_err = std::max(quad_err, r.error);
    return r.value;
  };
  const Nodewise nw = nodewise_psh(psi, c.param_grid().nodes(), c.fd(), rep, "psi");
  rep.results["alpha"] = c.alpha;
  rep.results["quadrature_error"] = quad_err;
  strict_verdict(c, rep, nw.margin, nw.error);
}

inline void run_bergman(const ExperimentConfig& c, Report& rep) {
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  const int k_max = c.k_max >= 0 ? c.k_max : (f.m == 1 ? 30 : 12);
  CVec z0 = CVec::Zero(f.m);
  for (std::size_t i = 0; i < c.graph_z0.size(); ++i) z0(static_cast<Eigen::Index>(i)) = c.graph_z0[i];
  CMat a = CMat::Zero(f.m, f.n);
  for (std::size_t i = 0; i < c.graph_slope.size(); ++i)
    a(static_cast<Eigen::Index>(i) / f.n, static_cast<Eigen::Index>(i) % f.n) = c.graph_slope[i];
  const HolomorphicMap xi = affine_graph(z0, a);
  bool truncation = false;
  double tail = 0.0;
  PointField logk = [&](const CVec& t) {
    const BergmanValue b = bergman_kernel(f, w, ParamPoint(t), FiberPoint(xi(t)), k_max, c.quadrature);
    truncation = truncation || b.truncation_warning;
    tail = std::max(tail, b.tail / b.value);
    return std::log(b.value);
  };
  const Nodewise nw = nodewise_psh(logk, c.param_grid().nodes(), c.fd(), rep, "log_kernel");
  rep.results["k_max"] = k_max;
  rep.results["relative_tail_max"] = tail;
  if (truncation) rep.add_warning("truncation: kernel terms not decaying at k_max");
  strict_verdict(c, rep, nw.margin, nw.error);
}

inline void run_prekopa(const ExperimentConfig& c, Report& rep) {
  if (uses_convex(c)) {
    const ConvexFamily f = build_convex(c.family, c.grid);
    const RealWeight w = build_real_weight(c.weight);
    RealField phi = [&](const RVec& t) { return prekopa_marginal(f, w, t, c.quadrature).value; };
    rep.columns = {};
    for (int j = 1; j <= f.n0; ++j) rep.columns.push_back("t" + std::to_string(j));
    for (const char* col : {"marginal", "hessian_min_eigenvalue", "error_estimate"}) rep.columns.push_back(col);
    Nodewise nw;
    for (const RVec& t : c.real_grid().nodes()) {
      const FdRealHessianResult h = real_hessian_fd(phi, t, c.fd());
      const double e = symmetric_eigenvalues(h.hessian)(0);
      nw.margin = std::min(nw.margin, e);
      nw.error = std::max(nw.error, h.error_estimate);
      std::vector<double> row(t.data(), t.data() + t.size());
      row.insert(row.end(), {phi(t), e, h.error_estimate});
      rep.rows.push_back(std::move(row));
    }
    rep.results["mode"] = "convex";
    strict_verdict(c, rep, nw.margin, nw.error);
    return;
  }
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  PointField phi = [&](const CVec& t) { return prekopa_marginal(f, w, ParamPoint(t), c.quadrature).value; };
  const Nodewise nw = nodewise_psh(phi, c.param_grid().nodes(), c.fd(), rep, "marginal");
  rep.results["mode"] = f.is_tube() ? "tube" : "complex";
  if (f.is_tube()) {
    double worst = 0.0;
    for (const CVec& t : c.param_grid().nodes()) {
      const double a = prekopa_marginal(f, w, ParamPoint(t), c.quadrature).value;
      const double b = tube_marginal_via_reinhardt(f, w, ParamPoint(t), c.quadrature).value;
      worst = std::max(worst, std::abs(a - b));
    }
    rep.results["bridge_max_deviation"] = worst;
  }
  strict_verdict(c, rep, nw.margin, nw.error);
}

inline void run_brunn_minkowski(const ExperimentConfig& c, Report& rep) {
  const ConvexFamily f = build_convex(c.family, c.grid);
  RealField vol = [&](const RVec& t) { return neg_log_volume(f, t, c.quadrature).value; };
  rep.columns = {};
  for (int j = 1; j <= f.n0; ++j) rep.columns.push_back("t" + std::to_string(j));
  for (const char* col : {"neg_log_volume", "hessian_min_eigenvalue", "error_estimate"}) rep.columns.push_back(col);
  Nodewise nw;
  for (const RVec& t : c.real_grid().nodes()) {
    const FdRealHessianResult h = real_hessian_fd(vol, t, c.fd());
    const double e = symmetric_eigenvalues(h.hessian)(0);
    nw.margin = std::min(nw.margin, e);
    nw.error = std::max(nw.error, h.error_estimate);
    std::vector<double> row(t.data(), t.data() + t.size());
    row.insert(row.end(), {vol(t), e, h.error_estimate});
    rep.rows.push_back(std::move(row));
  }
  strict_verdict(c, rep, nw.margin, nw.error);
}

inline void run_det_metric(const ExperimentConfig& c, Report& rep) {
  const FinslerMetric h = build_finsler(c.family);
  PointField f = [&](const CVec& t) { return -std::log(unit_ball_measure(h, ParamPoint(t), c.quadrature).value.real()); };
  const Nodewise nw = nodewise_psh(f, c.param_grid().nodes(), c.fd(), rep, "neg_log_ball_measure");
  const PshCheck spot = finsler_curvature_spot_check(h, c.box());
  rep.results["log_h_psh_margin"] = spot.margin;
  rep.results["log_h_psh_pass"] = spot.pass;
  if (!spot.pass) rep.add_warning("hypothesis: ln h is not plurisubharmonic on samples");
  strict_verdict(c, rep, nw.margin, nw.error);
}

inline void run_curvature_bound(const ExperimentConfig& c, Report& rep) {
  const DomainFamily f = build_family(c.family, c.box());
  const WeightField w = build_weight(c.weight, f.m);
  const int r = MonomialBasis(f.m, c.degree).size();
  std::vector<std::vector<CVec>> unit;
  for (int j = 0; j < f.n; ++j)
    for (int a = 0; a < r; ++a) {
      std::vector<CVec> u(static_cast<std::size_t>(f.n), CVec::Zero(r));
      u[static_cast<std::size_t>(j)](a) = 1.0;
      unit.push_back(u);
    }
  rep.columns = t_columns(f.n);
  for (const char* col : {"lhs_unit", "rhs_unit", "min_gap", "tolerance"}) rep.columns.push_back(col);
  double min_gap = std::numeric_limits<double>::infinity(), tol = 0.0;
  bool all = true;
  for (const CVec& t : c.param_grid().nodes()) {
    const InequalityReport ir = verify_curvature_inequality(f, w, c.degree, ParamPoint(t), c.quadrature, c.fd(), 4,
                                                            c.seed, unit);
    min_gap = std::min(min_gap, ir.min_gap);
    tol = std::max(tol, ir.tolerance);
    all = all && ir.pass;
    auto row = t_row(t);
    row.insert(row.end(), {ir.lhs.front(), ir.rhs.front(), ir.min_gap, ir.tolerance});
    rep.rows.push_back(std::move(row));
  }
  rep.results["min_gap"] = min_gap;
  rep.results["tolerance"] = tol;
  rep.pass = all;
  rep.verdict = all ? "pass" : "fail";
}

inline void run_regmax_props(const ExperimentConfig& c, Report& rep) {
  const RegMaxParams p;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0), d(0.0, 1.0);
  int monotone = 0, convex = 0, bounds = 0, symmetric = 0;
  const double tol = 1e-8;
  for (int s = 0; s < c.samples; ++s) {
    const double a = u(rng), b = u(rng), a2 = u(rng), b2 = u(rng), delta = d(rng);
    const double v = reg_max(p, a, b);
    if (reg_max(p, a + delta, b) < v - tol || reg_max(p, a, b + delta) < v - tol) ++monotone;
    if (reg_max(p, 0.5 * (a + a2), 0.5 * (b + b2)) > 0.5 * (v + reg_max(p, a2, b2)) + tol) ++convex;
    if (v < std::max(a, b) - tol || v > std::max(a + p.eta1, b + p.eta2) + tol) ++bounds;
    if (std::abs(v - reg_max(p, b, a)) > tol) ++symmetric;
  }
  rep.columns = {"property", "violations"};
  rep.rows = {{0, double(monotone)}, {1, double(convex)}, {2, double(bounds)}, {3, double(symmetric)}};
  rep.results["samples"] = c.samples;
  rep.results["violations"] = {{"monotone", monotone}, {"convex", convex}, {"bounds", bounds}, {"symmetric", symmetric}};
  rep.results["separation_value"] = reg_max(p, 5.0, 0.0);
  rep.results["center_value"] = reg_max(p, 0.0, 0.0);
  rep.pass = monotone + convex + bounds + symmetric == 0 && std::abs(reg_max(p, 5.0, 0.0) - 5.0) <= 1e-12;
  rep.verdict = rep.pass ? "pass" : "fail";
}

}  // namespace detail

/// Executes a validated config. Numeric failures propagate as NumericError.
inline Report run_experiment(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.name = c.name;
  rep.experiment = to_string(c.experiment);
  rep.config = to_json(c);
  switch (c.experiment) {
    case ExperimentKind::nakano: detail::run_nakano(c, rep); break;
    case ExperimentKind::character_psh: detail::run_character_psh(c, rep); break;
    case ExperimentKind::bergman: detail::run_bergman(c, rep); break;
    case ExperimentKind::prekopa: detail::run_prekopa(c, rep); break;
    case ExperimentKind::brunn_minkowski: detail::run_brunn_minkowski(c, rep); break;
    case ExperimentKind::det_metric: detail::run_det_metric(c, rep); break;
    case ExperimentKind::curvature_bound: detail::run_curvature_bound(c, rep); break;
    case ExperimentKind::regmax_props: detail::run_regmax_props(c, rep); break;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Built-in experiments

struct BuiltinExperiment {
  std::string name;
  std::string description;
  std::string yaml;
};

inline const std::vector<BuiltinExperiment>& builtin_experiments() {
  static const std::vector<BuiltinExperiment> list = {
      {"nakano_shrinking_ball", "Nakano positivity of E¹ over shrinking balls in C² with a flat weight (margin 6)",
       R"(schema: pshlab.config/1
name: nakano_shrinking_ball
experiment: nakano
family: {kind: shrinking_ball, m: 2, radius: 1.0, decay: 1.0}
weight: {kind: zero}
degree: 1
grid: {half_width: 0.5, resolution: 9}
expected: 6.0
tolerances: {expected: 0.12}
)"},
      {"nakano_hartogs", "Nakano positivity of E⁰ over the Hartogs disk family (margin 2)",
       R"(schema: pshlab.config/1
name: nakano_hartogs
experiment: nakano
family: {kind: hartogs_disk, radius: 1.0, decay: 1.0}
weight: {kind: zero}
degree: 0
grid: {half_width: 0.5, resolution: 9}
expected: 2.0
tolerances: {expected: 0.001}
)"},
      {"character_hartogs", "Strict psh of the character metric ψ for z¹ over the Hartogs disk (margin 4)",
       R"(schema: pshlab.config/1
name: character_hartogs
experiment: character_psh
family: {kind: hartogs_disk, radius: 1.0, decay: 1.0}
weight: {kind: zero}
alpha: [1]
grid: {half_width: 0.5, resolution: 9}
expected: 4.0
tolerances: {expected: 0.001}
)"},
      {"character_annulus", "Strict psh of the character metric for z⁻¹ over a moving annulus",
       R"(schema: pshlab.config/1
name: character_annulus
experiment: character_psh
family: {kind: reinhardt_shadow, inner: [0.3], outer: [1.0], decay: 1.0, growth: 1.0}
weight: {kind: zero}
alpha: [-1]
grid: {half_width: 0.35, resolution: 9}
)"},
      {"bergman_hartogs", "Strict psh of ln K(t, 0) for the Hartogs disk family (margin 2)",
       R"(schema: pshlab.config/1
name: bergman_hartogs
experiment: bergman
family: {kind: hartogs_disk, radius: 1.0, decay: 1.0}
weight: {kind: zero}
bergman: {k_max: 30, graph_z0: [0.0], graph_slope: [0.0]}
grid: {half_width: 0.5, resolution: 5}
expected: 2.0
tolerances: {expected: 0.01}
)"},
      {"prekopa_tube", "Prékopa marginal of a tube family with X_t = {x² < 1 − (Re t)²} (margin 1/4)",
       R"(schema: pshlab.config/1
name: prekopa_tube
experiment: prekopa
family: {kind: tube, m: 1, radius: 1.0, coupling: 1.0}
weight: {kind: zero}
grid: {half_width: 0.5, resolution: 5}
expected: 0.25
tolerances: {expected: 0.001}
)"},
      {"brunn_minkowski_ball", "Strict convexity of −ln|D_t| for D = {t² + |x|² < 1}, m₀ = 2 (margin 2)",
       R"(schema: pshlab.config/1
name: brunn_minkowski_ball
experiment: brunn_minkowski
convex: {kind: ball, m0: 2, radius: 1.0}
grid: {half_width: 0.5, resolution: 9}
expected: 2.0
tolerances: {expected: 0.001}
)"},
      {"curvature_bound_product", "Berndtsson's curvature lower bound on the product disk with φ = |t|² + |z|²",
       R"(schema: pshlab.config/1
name: curvature_bound_product
experiment: curvature_bound
family: {kind: product, m: 1, radius: 1.0}
weight: {kind: quadratic, a_t: 1.0, b_z: [1.0]}
degree: 0
grid: {half_width: 0.5, resolution: 3}
)"},
      {"det_metric_cone", "Strict negativity of det h for h_t(z) = e^{|t|²}|z| (margin 2)",
       R"(schema: pshlab.config/1
name: det_metric_cone
experiment: det_metric
finsler: {kind: hermitian, diagonal: [1.0], growth: 1.0}
grid: {half_width: 0.5, resolution: 5}
expected: 2.0
tolerances: {expected: 0.01}
)"},
      {"regmax_props", "Monotonicity, convexity, bounds and symmetry of the regularized maximum",
       R"(schema: pshlab.config/1
name: regmax_props
experiment: regmax_props
samples: 1000
seed: 7
)"},
      {"product_flat", "Flat control: product family, curvature identically zero (fails strictness)",
       R"(schema: pshlab.config/1
name: product_flat
experiment: nakano
family: {kind: product, m: 2, radius: 1.0}
weight: {kind: zero}
degree: 1
grid: {half_width: 0.5, resolution: 5}
)"},
  };
  return list;
}

inline const BuiltinExperiment* find_builtin(const std::string& name) {
  for (const auto& b : builtin_experiments())
    if (b.name == name) return &b;
  return nullptr;
}

}  // namespace pshlab
