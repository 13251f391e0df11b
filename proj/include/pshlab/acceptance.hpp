#pragma once

// Acceptance suite: one check per criterion, each returning a verdict, a
// one-line summary of the measured quantities and its runtime.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/bergman.hpp"
#include "pshlab/corollaries.hpp"
#include "pshlab/curvature.hpp"
#include "pshlab/symmetric_bundle.hpp"

namespace pshlab {

struct AcceptanceOptions {
  std::optional<double> eps_strict;  // overrides the default 10× error threshold
  int quadrature_order = 64;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string title;
  std::function<CriterionResult(const AcceptanceOptions&)> run;
};

namespace accept {

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Log {
  std::ostringstream os;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (!os.str().empty()) os << "; ";
    os << what << (cond ? "" : " [x]");
    ok = ok && cond;
  }
};

inline double strict_threshold(const AcceptanceOptions& o, double error) { return o.eps_strict.value_or(10.0 * error); }

inline QuadratureSpec quad(const AcceptanceOptions& o) {
  QuadratureSpec q;
  q.order = o.quadrature_order;
  return q;
}

inline ParamGrid grid9() { return {ParamBox::square(1, 0.5), 9}; }
inline FdScheme fd_default() { return {1e-2, true}; }

// Hartogs character metrics ψ_k for k = 0, 1, 2.
inline CriterionResult c1(const AcceptanceOptions& o) {
  Log log;
  const auto fam = hartogs_disk();
  const auto g = grid9();
  for (int k = 0; k <= 2; ++k) {
    double worst = 0.0;
    PointField psi = [&](const CVec& t) {
      return character_log_metric(fam, WeightField::zero(), MultiIndex({k}), ParamPoint(t), quad(o)).value;
    };
    for (const CVec& t : g.nodes())
      worst = std::max(worst, std::abs(psi(t) - ((2 * k + 2) * t.squaredNorm() + std::log((k + 1) / kPi))));
    const MarginResult m = strict_psh_margin(psi, g, fd_default());
    log.check(worst <= 1e-6, "k=" + std::to_string(k) + " max|ψ-ψ*|=" + fmt("%.1e", worst));
    log.check(std::abs(m.margin - (2 * k + 2)) <= 1e-3, "margin=" + fmt("%.6f", m.margin));
    log.check(m.margin > strict_threshold(o, m.error_estimate), "strict");
  }
  return {1, "", log.ok, log.os.str()};
}

// Nakano positivity of E¹ over shrinking balls with φ = 0.
inline CriterionResult c2(const AcceptanceOptions& o) {
  Log log;
  const auto fam = shrinking_ball(2);
  const auto g = grid9();
  const CurvatureReport rep = certify_nakano(fam, WeightField::zero(), 1, g, quad(o), fd_default(), o.eps_strict);
  log.check(std::abs(rep.margin - 6.0) <= 0.02 * 6.0, "margin=" + fmt("%.6f", rep.margin) + " (6 ± 2%)");
  log.check(rep.pass, "strict (eps=" + fmt("%.2e", rep.eps_strict) + ")");
  double weight_max = -std::numeric_limits<double>::infinity();
  const WeightField w = WeightField::zero();
  std::mt19937_64 rng(5);
  for (const CVec& t : g.nodes()) {
    const CVec z = detail::random_fiber(2, 0.3, rng);
    weight_max = std::max(weight_max, min_eigenvalue(weight_hessian(w, t, z).full));
  }
  log.check(weight_max <= 0.0, "weight Hessian margin max=" + fmt("%.1e", weight_max));
  return {2, "", log.ok, log.os.str()};
}

// Flatness of the product family.
inline CriterionResult c3(const AcceptanceOptions& o) {
  Log log;
  const CurvatureReport rep =
      certify_nakano(product_family(2), WeightField::zero(), 1, grid9(), quad(o), fd_default(), o.eps_strict);
  log.check(std::abs(rep.margin) <= 10.0 * rep.error_estimate,
            "|margin|=" + fmt("%.2e", std::abs(rep.margin)) + " <= 10*err=" + fmt("%.2e", 10.0 * rep.error_estimate));
  return {3, "", log.ok, log.os.str()};
}

// Berndtsson's inequality on the product disk.
inline CriterionResult c4(const AcceptanceOptions& o) {
  Log log;
  const auto fam = product_family(1);
  const std::vector<std::vector<CVec>> unit = {{CVec::Ones(1)}};
  const double exact = kPi * (1.0 - std::exp(-1.0));
  const InequalityReport eq =
      verify_curvature_inequality(fam, WeightField::quadratic(1.0, {1.0}), 0, ParamPoint{0.0}, quad(o), fd_default(), 0, 1, unit);
  log.check(std::abs(eq.lhs[0] - exact) <= 1e-4 && std::abs(eq.rhs[0] - exact) <= 1e-4,
            "equality case LHS=" + fmt("%.8f", eq.lhs[0]) + " RHS=" + fmt("%.8f", eq.rhs[0]));
  double min_gap = std::numeric_limits<double>::infinity(), tol = 0.0;
  bool positive = true;
  for (const CVec& t : ParamGrid{ParamBox::square(1, 0.5), 3}.nodes()) {
    const InequalityReport ir = verify_curvature_inequality(fam, WeightField::quadratic(2.0, {1.0}), 0, ParamPoint(t),
                                                            quad(o), fd_default(), 0, 1, unit);
    min_gap = std::min(min_gap, ir.min_gap);
    tol = std::max(tol, ir.tolerance);
    positive = positive && ir.min_gap > ir.tolerance;
  }
  log.check(positive, "phi=2|t|^2+|z|^2 min(LHS-RHS)=" + fmt("%.2e", min_gap) + " vs error " + fmt("%.2e", tol));
  return {4, "", log.ok, log.os.str()};
}

// Schur complement.
inline CriterionResult c5(const AcceptanceOptions&) {
  Log log;
  auto blk = [](double a, double b, double f) {
    return ComplexHessian::from_blocks(CMat::Constant(1, 1, a), CMat::Constant(1, 1, b), CMat::Constant(1, 1, f));
  };
  const double e1 = std::abs(schur_complement(blk(1, 0, 1))(0, 0) - 1.0);
  const double e2 = std::abs(schur_complement(blk(1, 1, 1))(0, 0) - 0.0);
  const double e3 = std::abs(schur_complement(blk(2, 1, 1))(0, 0) - 1.0);
  log.check(e1 == 0.0 && e2 == 0.0 && e3 == 0.0, "examples exact");
  std::mt19937_64 rng(55);
  std::normal_distribution<double> g;
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 100; ++s) {
    CMat x(2, 2);
    for (int i = 0; i < 4; ++i) x(i / 2, i % 2) = cplx(g(rng), g(rng));
    const CMat h = x * x.adjoint() + 1e-3 * CMat::Identity(2, 2);
    worst = std::min(worst, min_eigenvalue(schur_complement(ComplexHessian(h, 1))));
  }
  log.check(worst >= 0.0, "random PD min eigenvalue=" + fmt("%.3e", worst));
  return {5, "", log.ok, log.os.str()};
}

// Regularized maximum.
inline CriterionResult c6(const AcceptanceOptions&) {
  Log log;
  const RegMaxParams p;
  const double tol = 1e-8;
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(-3.0, 3.0), d(0.0, 1.0);
  int mono = 0, conv = 0, bnd = 0;
  for (int s = 0; s < 1000; ++s) {
    const double a = u(rng), b = u(rng), a2 = u(rng), b2 = u(rng), delta = d(rng);
    const double v = reg_max(p, a, b);
    if (reg_max(p, a + delta, b) < v - tol || reg_max(p, a, b + delta) < v - tol) ++mono;
    if (reg_max(p, 0.5 * (a + a2), 0.5 * (b + b2)) > 0.5 * (v + reg_max(p, a2, b2)) + tol) ++conv;
    if (v < std::max(a, b) - tol || v > std::max(a + p.eta1, b + p.eta2) + tol) ++bnd;
  }
  log.check(mono == 0, "monotone violations=" + std::to_string(mono));
  log.check(conv == 0, "convexity violations=" + std::to_string(conv));
  log.check(bnd == 0, "bound violations=" + std::to_string(bnd));
  // Two random psh quadratics in ℂ².
  std::normal_distribution<double> g;
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 20; ++s) {
    CMat x1(2, 2), x2(2, 2);
    for (int i = 0; i < 4; ++i) {
      x1(i / 2, i % 2) = cplx(g(rng), g(rng));
      x2(i / 2, i % 2) = cplx(g(rng), g(rng));
    }
    const CMat p1 = x1 * x1.adjoint(), p2 = x2 * x2.adjoint();
    CVec b1(2), b2(2);
    b1 << cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
    b2 << cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
    PointField u1 = [p1, b1](const CVec& t) { return (t.adjoint() * p1 * t)(0).real() + (b1.dot(t)).real(); };
    PointField u2 = [p2, b2](const CVec& t) { return (t.adjoint() * p2 * t)(0).real() + (b2.dot(t)).real() + 0.3; };
    const PointField f = reg_max_compose(p, u1, u2);
    CVec t(2);
    t << cplx(g(rng), g(rng)) * 0.3, cplx(g(rng), g(rng)) * 0.3;
    const FdHessianResult h = complex_hessian_fd(f, t, {1e-2, true});
    worst = std::min(worst, min_eigenvalue(h.hessian.full) + h.error_estimate);
  }
  log.check(worst >= -tol, "composed Hessian min eigenvalue=" + fmt("%.2e", worst));
  const double sep = std::abs(reg_max(p, 5.0, 0.0) - 5.0);
  log.check(sep <= 1e-12, "|max(5,0)-5|=" + fmt("%.1e", sep));
  return {6, "", log.ok, log.os.str()};
}

// Bergman kernel of the unit disk and ln K along ξ ≡ 0 for the Hartogs disk.
inline CriterionResult c7(const AcceptanceOptions& o) {
  Log log;
  const auto disk = product_family(1);
  double worst = 0.0;
  for (double r : {0.0, 0.3, 0.5}) {
    const BergmanValue b = bergman_kernel(disk, WeightField::zero(), ParamPoint{0.0}, FiberPoint{cplx(r)}, 30, quad(o));
    worst = std::max(worst, std::abs(b.value - 1.0 / (kPi * std::pow(1.0 - r * r, 2))));
  }
  log.check(worst <= 1e-5, "max kernel error=" + fmt("%.1e", worst));
  const GraphMargin gm = logK_graph_margin(hartogs_disk(), WeightField::zero(),
                                           affine_graph(CVec::Zero(1), CMat::Zero(1, 1)), grid9(), 30, fd_default(), quad(o));
  log.check(std::abs(gm.margin.margin - 2.0) <= 1e-2, "lnK margin=" + fmt("%.6f", gm.margin.margin));
  log.check(gm.margin.margin > strict_threshold(o, gm.margin.error_estimate), "strict");
  return {7, "", log.ok, log.os.str()};
}

// Brunn–Minkowski and Prékopa on convex families.
inline CriterionResult c8(const AcceptanceOptions& o) {
  Log log;
  const std::vector<RVec> origin = {RVec::Zero(1)};
  for (int m0 : {1, 2}) {
    const ConvexFamily f = convex_ball(m0);
    validate_convex_family(f);
    const MarginResult m = brunn_minkowski_margin(f, origin, fd_default(), quad(o));
    log.check(std::abs(m.margin - m0) <= 1e-3, "m0=" + std::to_string(m0) + " f''(0)=" + fmt("%.6f", m.margin));
    log.check(m.margin > strict_threshold(o, m.error_estimate), "strict");
  }
  const ConvexFamily iv = convex_interval();
  const RealWeight w = [](const RVec& t, const RVec& x) { return t.squaredNorm() + x.squaredNorm(); };
  const RealField phi = [&](const RVec& t) { return prekopa_marginal(iv, w, t, quad(o)).value; };
  const MarginResult pm = strict_convex_margin(phi, origin, fd_default());
  log.check(std::abs(pm.margin - 2.0) <= 1e-3, "prekopa phi''(0)=" + fmt("%.6f", pm.margin));
  return {8, "", log.ok, log.os.str()};
}

// Tube ↔ Reinhardt bridge.
inline CriterionResult c9(const AcceptanceOptions& o) {
  Log log;
  const auto tube = tube_family(1, 1.0, 0.0);
  for (const WeightField& w : {WeightField::zero(), WeightField::tube_polynomial(0.0, 0.0, 1.0)}) {
    const double a = prekopa_marginal(tube, w, ParamPoint{0.0}, quad(o)).value;
    const double b = tube_marginal_via_reinhardt(tube, w, ParamPoint{0.0}, quad(o)).value;
    log.check(std::abs(a - b) <= 1e-6, w.name + " |diff|=" + fmt("%.1e", std::abs(a - b)));
  }
  return {9, "", log.ok, log.os.str()};
}

// Determinant metric of Finsler metrics.
inline CriterionResult c10(const AcceptanceOptions& o) {
  Log log;
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int m : {1, 2}) {
    for (int s = 0; s < 20; ++s) {
      CMat x(m, m);
      for (int i = 0; i < m * m; ++i) x(i / m, i % m) = cplx(g(rng), g(rng));
      const CMat G = x * x.adjoint() + 0.2 * CMat::Identity(m, m);
      const double expect = (m == 1 ? 1.0 : 2.0) * G.determinant().real() / std::pow(kPi, m);
      const double got = det_metric_norm(hermitian_finsler(G), ParamPoint{0.0}, quad(o)).value;
      worst = std::max(worst, std::abs(got / expect - 1.0));
    }
  }
  log.check(worst <= 1e-6, "ellipsoid max rel error=" + fmt("%.1e", worst));
  const double simplex = det_metric_norm(l1_finsler({1.0, 1.0}), ParamPoint{0.0}, quad(o)).value;
  log.check(std::abs(simplex - 6.0 / (kPi * kPi)) <= 1e-4, "simplex=" + fmt("%.8f", simplex));
  const MarginResult m =
      det_metric_curvature(hermitian_finsler(CMat::Identity(1, 1), 1.0), grid9(), fd_default(), quad(o));
  log.check(std::abs(m.margin - 2.0) <= 1e-2, "curvature margin=" + fmt("%.6f", m.margin));
  log.check(m.margin > strict_threshold(o, m.error_estimate), "strict");
  return {10, "", log.ok, log.os.str()};
}

// Frame covariance of the Nakano spectrum.
inline CriterionResult c11(const AcceptanceOptions& o) {
  Log log;
  const auto fam = shrinking_ball(2);
  const ParamGrid g{ParamBox::square(1, 0.5), 3};
  const GramField field = gram_field(fam, WeightField::zero(), 1, g, quad(o), fd_default());
  std::mt19937_64 rng(1111);
  std::normal_distribution<double> gauss;
  CMat p(2, 2), G(2, 2);
  for (int i = 0; i < 4; ++i) {
    p(i / 2, i % 2) = cplx(gauss(rng), gauss(rng));
    G(i / 2, i % 2) = cplx(gauss(rng), gauss(rng));
  }
  const GramField basis_changed =
      transform_field(field, [&](const CMat& h) -> CMat { return p.transpose() * h * p.conjugate(); });
  const GramField frame_changed =
      transform_field(field, [&](const CMat& h) -> CMat { return frame_change_covariance(h, G, 1); });
  double worst_basis = 0.0, worst_frame = 0.0;
  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    const RVec s0 = node_curvature(field, i).spectrum;
    const RVec s1 = node_curvature(basis_changed, i).spectrum;
    const RVec s2 = node_curvature(frame_changed, i).spectrum;
    const double scale = s0.cwiseAbs().maxCoeff();
    worst_basis = std::max(worst_basis, (s1 - s0).cwiseAbs().maxCoeff() / scale);
    worst_frame = std::max(worst_frame, (s2 - s0).cwiseAbs().maxCoeff() / scale);
  }
  log.check(worst_basis <= 1e-6, "basis change rel dev=" + fmt("%.1e", worst_basis));
  log.check(worst_frame <= 1e-6, "frame change rel dev=" + fmt("%.1e", worst_frame));
  return {11, "", log.ok, log.os.str()};
}

// Convergence discipline.
inline CriterionResult c12(const AcceptanceOptions& o) {
  Log log;
  // Plain central differences are second order.
  const PointField quartic = [](const CVec& t) { return std::pow(t.squaredNorm(), 2); };
  const PointField logistic = [](const CVec& t) { return std::log(1.0 + t.squaredNorm()); };
  struct Case {
    const char* name;
    PointField f;
    CVec t;
    double exact;
  };
  CVec t1 = CVec::Constant(1, cplx(1.0, 0.0)), t2 = CVec::Constant(1, cplx(0.3, 0.4));
  const double s2 = t2.squaredNorm();
  for (const Case& c : {Case{"|t|^4", quartic, t1, 4.0}, Case{"ln(1+|t|^2)", logistic, t2, 1.0 / ((1 + s2) * (1 + s2))}}) {
    const double e1 = std::abs(complex_hessian_fd(c.f, c.t, {1e-2, false}).hessian.full(0, 0).real() - c.exact);
    const double e2 = std::abs(complex_hessian_fd(c.f, c.t, {5e-3, false}).hessian.full(0, 0).real() - c.exact);
    log.check(e1 / e2 >= 3.5, std::string(c.name) + " ratio=" + fmt("%.3f", e1 / e2));
  }
  // Doubling the quadrature order moves every quadrature-backed criterion
  // value by less than its reported error estimate.
  QuadratureSpec q1 = quad(o), q2 = quad(o);
  q2.order = 2 * q1.order;
  int bad = 0, total = 0;
  double worst_ratio = 0.0;
  auto cmp = [&](const QuadResult& a, const QuadResult& b) {
    ++total;
    const double d = std::abs(a.value - b.value);
    if (!(d <= a.error)) ++bad;
    if (a.error > 0) worst_ratio = std::max(worst_ratio, d / a.error);
  };
  const auto hd = hartogs_disk();
  for (int k = 0; k <= 2; ++k)
    for (double x : {0.0, 0.5})
      cmp(weighted_monomial_integral(hd, WeightField::zero(), ParamPoint{cplx(x, x)}, MultiIndex({k}), MultiIndex({k}), q1),
          weighted_monomial_integral(hd, WeightField::zero(), ParamPoint{cplx(x, x)}, MultiIndex({k}), MultiIndex({k}), q2));
  const auto sb = shrinking_ball(2);
  for (const auto& a : MonomialBasis(2, 1).indices)
    cmp(weighted_monomial_integral(sb, WeightField::zero(), ParamPoint{0.2}, a, a, q1),
        weighted_monomial_integral(sb, WeightField::zero(), ParamPoint{0.2}, a, a, q2));
  const auto pd = product_family(1);
  const auto wq = WeightField::quadratic(1.0, {1.0});
  cmp(weighted_monomial_integral(pd, wq, ParamPoint{0.0}, MultiIndex({0}), MultiIndex({0}), q1),
      weighted_monomial_integral(pd, wq, ParamPoint{0.0}, MultiIndex({0}), MultiIndex({0}), q2));
  cmp(berndtsson_lower_bound(pd, wq, ParamPoint{0.0}, {CVec::Ones(1)}, MonomialBasis(1, 0), q1),
      berndtsson_lower_bound(pd, wq, ParamPoint{0.0}, {CVec::Ones(1)}, MonomialBasis(1, 0), q2));
  const auto tube = tube_family(1, 1.0, 0.0);
  for (const WeightField& w : {WeightField::zero(), WeightField::tube_polynomial(0.0, 0.0, 1.0)}) {
    cmp(tube_base_integral(tube, w, ParamPoint{0.0}, q1), tube_base_integral(tube, w, ParamPoint{0.0}, q2));
    const auto [img, psi] = tube_to_reinhardt(tube, w);
    const MultiIndex z0({0});
    cmp(weighted_monomial_integral(img, psi, ParamPoint{0.0}, z0, z0, q1),
        weighted_monomial_integral(img, psi, ParamPoint{0.0}, z0, z0, q2));
  }
  cmp(unit_ball_measure(l1_finsler({1.0, 1.0}), ParamPoint{0.0}, q1),
      unit_ball_measure(l1_finsler({1.0, 1.0}), ParamPoint{0.0}, q2));
  CMat G(2, 2);
  G << 2.0, cplx(0.3, 0.1), cplx(0.3, -0.1), 1.0;
  cmp(unit_ball_measure(hermitian_finsler(G), ParamPoint{0.0}, q1),
      unit_ball_measure(hermitian_finsler(G), ParamPoint{0.0}, q2));
  for (int m0 : {1, 2}) {
    const ConvexFamily f = convex_ball(m0);
    cmp(detail::convex_integral(f, nullptr, RVec::Constant(1, 0.3), q1),
        detail::convex_integral(f, nullptr, RVec::Constant(1, 0.3), q2));
  }
  log.check(bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) +
                          " quadrature values stable under order doubling (max diff/err=" + fmt("%.2f", worst_ratio) + ")");
  return {12, "", log.ok, log.os.str()};
}

}  // namespace accept

inline const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list = {
      {1, "hartogs character metric", accept::c1},
      {2, "nakano positivity, flat weight", accept::c2},
      {3, "flatness control", accept::c3},
      {4, "berndtsson bound on product disk", accept::c4},
      {5, "schur complement", accept::c5},
      {6, "regularized maximum", accept::c6},
      {7, "bergman kernel", accept::c7},
      {8, "brunn-minkowski and prekopa", accept::c8},
      {9, "tube-reinhardt bridge", accept::c9},
      {10, "determinant metric", accept::c10},
      {11, "frame covariance", accept::c11},
      {12, "convergence discipline", accept::c12},
  };
  return list;
}

/// Runs one criterion, timing it and converting library errors into a failed
/// verdict.
inline CriterionResult run_criterion(const Criterion& c, const AcceptanceOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run(o);
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = std::string("error: ") + e.what();
  }
  r.id = c.id;
  r.title = c.title;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Runtime budgets.
  if (c.id == 1 && r.seconds >= 10.0) {
    r.pass = false;
    r.summary += "; runtime budget 10 s exceeded";
  }
  if (c.id == 2 && r.seconds >= 60.0) {
    r.pass = false;
    r.summary += "; runtime budget 60 s exceeded";
  }
  return r;
}

inline std::string format_criterion(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] C%-2d %-34s (%6.2f s) ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.summary;
}

}  // namespace pshlab
