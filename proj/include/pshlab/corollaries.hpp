#pragma once

// Volume and marginal functionals of fibered families: −ln|Ω_t|, Prékopa-type
// marginals, the exponential bridge from tube to Reinhardt fibers, strict
// convexity of −ln|D_t| for convex families, and the determinant metric
// induced by a Finsler metric through unit-ball volumes.

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pshlab/metric.hpp"
#include "pshlab/psh_toolkit.hpp"

namespace pshlab {

struct ScalarResult {
  double value = 0.0;
  double error = 0.0;
};

// ---------------------------------------------------------------------------
// Real convex families D ⊂ U₀ × ℝ^{m₀}

using RealWeight = std::function<double(const RVec& t, const RVec& x)>;

struct ConvexFamily {
  int n0 = 1;
  int m0 = 1;
  std::function<double(const RVec& t, const RVec& x)> rho0;
  /// Fiber D_t as nested limits; the parameter is passed as a complex vector
  /// with zero imaginary part.
  NestedLimits base;
  std::vector<Interval> param_box;
  std::string name = "custom";
  std::map<std::string, double> params;
};

inline CVec as_complex(const RVec& t) { return t.cast<cplx>(); }

/// D_t = {x : |t|² + |x|² < R²}.
inline ConvexFamily convex_ball(int m0, double radius = 1.0, Interval box = {-0.5, 0.5}) {
  ConvexFamily f;
  f.n0 = 1;
  f.m0 = m0;
  f.name = "convex_ball";
  f.params = {{"m0", m0}, {"radius", radius}};
  f.param_box = {box};
  f.rho0 = [radius](const RVec& t, const RVec& x) { return t.squaredNorm() + x.squaredNorm() - radius * radius; };
  f.base.dim = m0;
  f.base.limits = [radius](const CVec& t, int, std::span<const double> prefix) {
    double w2 = radius * radius;
    for (Eigen::Index j = 0; j < t.size(); ++j) w2 -= t(j).real() * t(j).real();
    for (double x : prefix) w2 -= x * x;
    const double w = std::sqrt(std::max(w2, 0.0));
    return Interval{-w, w};
  };
  return f;
}

/// Rigidly translated interval D_t = (v t − ½w, v t + ½w); ρ₀ is not strictly convex.
inline ConvexFamily sliding_interval(double velocity, double width = 2.0, Interval box = {-0.5, 0.5}) {
  ConvexFamily f;
  f.n0 = 1;
  f.m0 = 1;
  f.name = "sliding_interval";
  f.params = {{"velocity", velocity}, {"width", width}};
  f.param_box = {box};
  f.rho0 = [velocity, width](const RVec& t, const RVec& x) {
    const double y = x(0) - velocity * t(0);
    return y * y - 0.25 * width * width;
  };
  f.base.dim = 1;
  f.base.limits = [velocity, width](const CVec& t, int, std::span<const double>) {
    const double c = velocity * t(0).real();
    return Interval{c - 0.5 * width, c + 0.5 * width};
  };
  return f;
}

/// Constant interval (−R, R) with no t-dependence.
inline ConvexFamily convex_interval(double radius = 1.0, Interval box = {-0.5, 0.5}) {
  ConvexFamily f;
  f.n0 = 1;
  f.m0 = 1;
  f.name = "interval";
  f.params = {{"radius", radius}};
  f.param_box = {box};
  f.rho0 = [radius](const RVec& t, const RVec& x) { return t.squaredNorm() + x.squaredNorm() - radius * radius; };
  f.base.dim = 1;
  f.base.limits = [radius](const CVec&, int, std::span<const double>) { return Interval{-radius, radius}; };
  return f;
}

/// Rejects families whose ρ₀ is not strictly convex on samples or whose
/// fibers are empty.
inline void validate_convex_family(const ConvexFamily& f, int samples = 64, std::uint64_t seed = 0xc0ffee) {
  if (static_cast<int>(f.param_box.size()) != f.n0) throw ConfigError("family.param_box", "dimension differs from n0");
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    RVec t(f.n0);
    for (int j = 0; j < f.n0; ++j) t(j) = detail::random_in(f.param_box[static_cast<std::size_t>(j)], rng);
    std::vector<double> prefix;
    for (int a = 0; a < f.m0; ++a) {
      const Interval iv = f.base.limits(as_complex(t), a, prefix);
      if (!(iv.width() > 1e-9) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
        throw ConfigError("family", "empty or unbounded convex fiber");
      prefix.push_back(iv.mid());
    }
    RVec x = Eigen::Map<const RVec>(prefix.data(), f.m0);
    RVec joint(f.n0 + f.m0);
    joint << t, x;
    RealField rho = [&](const RVec& y) { return f.rho0(y.head(f.n0), y.tail(f.m0)); };
    const RMat h = real_hessian_fd(rho, joint, {1e-3, true}).hessian;
    const RVec ev = symmetric_eigenvalues(h);
    if (!(ev(0) > 1e-6 * std::max(1.0, ev(ev.size() - 1))))
      throw ConfigError("family.rho0", "defining function is not strictly convex (min Hessian eigenvalue " +
                                           std::to_string(ev(0)) + ")");
  }
}

/// Tube family over ℂⁿ⁰ with fibers D_{Re τ} + iℝ^{m₀}.
inline DomainFamily complexify(const ConvexFamily& f) {
  DomainFamily d;
  d.kind = FamilyKind::tube;
  d.n = f.n0;
  d.m = f.m0;
  d.symmetry = Symmetry::tube;
  d.param_box.re = f.param_box;
  d.param_box.im.assign(f.param_box.size(), Interval{-0.5, 0.5});
  d.params = f.params;
  d.rho = [rho0 = f.rho0](const CVec& t, const CVec& z) { return rho0(t.real(), z.real()); };
  NestedLimits nl = f.base;
  nl.limits = [inner = f.base.limits](const CVec& t, int a, std::span<const double> p) {
    return inner(t.real().cast<cplx>(), a, p);
  };
  d.fiber = TubeForm{nl};
  d.z_bound = 1e6;
  d.oracle = "complexification of " + f.name;
  return d;
}

namespace detail {

inline QuadResult convex_integral(const ConvexFamily& f, const RealWeight* weight, const RVec& t,
                                  const QuadratureSpec& spec) {
  const CVec tc = as_complex(t);
  std::function<Acc<double>(int)> eval = [&](int order) {
    return nested_gl<double>(f.base, tc, order, [&](std::span<const double> x) {
      if (!weight) return 1.0;
      return std::exp(-(*weight)(t, Eigen::Map<const RVec>(x.data(), static_cast<Eigen::Index>(x.size()))));
    });
  };
  return refine<double>(eval, spec, Strategy::tube_base);
}

inline ScalarResult neg_log(const QuadResult& q, const char* op) {
  const double v = q.value.real();
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(op) + ": fiber has zero or negative measure");
  return {-std::log(v), q.error / v};
}

}  // namespace detail

/// −ln|Ω_t| (−ln|X_t| for tube fibers).
inline ScalarResult neg_log_volume(const DomainFamily& family, const ParamPoint& t, const QuadratureSpec& spec = {}) {
  if (family.is_tube())
    return detail::neg_log(tube_base_integral(family, WeightField::zero(), t, spec), "neg_log_volume");
  return detail::neg_log(fiber_volume(family, t, spec), "neg_log_volume");
}

/// −ln|D_t|.
inline ScalarResult neg_log_volume(const ConvexFamily& family, const RVec& t, const QuadratureSpec& spec = {}) {
  return detail::neg_log(detail::convex_integral(family, nullptr, t, spec), "neg_log_volume");
}

/// φ̃(t) = −ln ∫_{Ω_t} e^{−φ(t,z)} dλ_z (over the real base for tube fibers).
inline ScalarResult prekopa_marginal(const DomainFamily& family, const WeightField& weight, const ParamPoint& t,
                                     const QuadratureSpec& spec = {}) {
  if (family.is_tube()) return detail::neg_log(tube_base_integral(family, weight, t, spec), "prekopa_marginal");
  const MultiIndex zero(std::vector<int>(static_cast<std::size_t>(family.m), 0));
  return detail::neg_log(weighted_monomial_integral(family, weight, t, zero, zero, spec), "prekopa_marginal");
}

/// φ̃(t) = −ln ∫_{D_t} e^{−φ(t,x)} dλ_x.
inline ScalarResult prekopa_marginal(const ConvexFamily& family, const RealWeight& weight, const RVec& t,
                                     const QuadratureSpec& spec = {}) {
  return detail::neg_log(detail::convex_integral(family, &weight, t, spec), "prekopa_marginal");
}

/// Image of a tube family under (t, z) ↦ (t, e^{z}) with the weight
/// ψ(t, w) = φ(t, ln|w|) + 2 Σ ln|w_i|. Marginals of the image equal those of
/// the tube minus m·ln(2π).
inline std::pair<DomainFamily, WeightField> tube_to_reinhardt(const DomainFamily& tube, const WeightField& weight) {
  const auto* tf = std::get_if<TubeForm>(&tube.fiber);
  if (!tf) throw DomainError("tube_to_reinhardt: family is not a tube family");
  if (!weight.respects(Symmetry::tube)) throw DomainError("tube_to_reinhardt: weight depends on Im z");
  const int m = tube.m;
  DomainFamily out;
  out.kind = FamilyKind::custom;
  out.n = tube.n;
  out.m = m;
  out.symmetry = Symmetry::reinhardt;
  out.param_box = tube.param_box;
  out.params = tube.params;
  out.oracle = "exponential image of a tube family";
  auto log_moduli = [m](const CVec& w, bool& on_axis) {
    CVec x(m);
    on_axis = false;
    for (int i = 0; i < m; ++i) {
      const double r = std::abs(w(i));
      if (r == 0.0) on_axis = true;
      x(i) = on_axis ? 0.0 : std::log(r);
    }
    return x;
  };
  out.rho = [rho = tube.rho, log_moduli](const CVec& t, const CVec& w) {
    bool axis = false;
    const CVec x = log_moduli(w, axis);
    return axis ? 1.0 : rho(t, x);
  };
  NestedLimits shadow;
  shadow.dim = m;
  shadow.limits = [base = tf->base.limits](const CVec& t, int a, std::span<const double> r) {
    std::vector<double> x(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) x[i] = std::log(r[i]);
    const Interval iv = base(t, a, x);
    return Interval{std::exp(iv.lo), std::exp(iv.hi)};
  };
  out.fiber = ShadowForm{shadow};
  double hi = 0.0;
  {
    std::vector<double> prefix;
    for (int a = 0; a < m; ++a) {
      const Interval iv = tf->base.limits(tube.param_box.center(), a, prefix);
      hi = std::max(hi, iv.hi);
      prefix.push_back(iv.mid());
    }
  }
  out.z_bound = 4.0 * std::exp(hi + 1.0);

  WeightField psi;
  psi.name = "exp_pullback(" + weight.name + ")";
  psi.invariance = Invariance::torus;
  psi.params = weight.params;
  psi.phi = [phi = weight, log_moduli](const CVec& t, const CVec& w) {
    bool axis = false;
    const CVec x = log_moduli(w, axis);
    if (axis) return std::numeric_limits<double>::infinity();
    return phi(t, x) + 2.0 * x.real().sum();
  };
  return {std::move(out), std::move(psi)};
}

/// Tube marginal computed on the Reinhardt image, normalized by (2π)ᵐ.
inline ScalarResult tube_marginal_via_reinhardt(const DomainFamily& tube, const WeightField& weight,
                                                const ParamPoint& t, const QuadratureSpec& spec = {}) {
  const auto [image, psi] = tube_to_reinhardt(tube, weight);
  ScalarResult r = prekopa_marginal(image, psi, t, spec);
  r.value += tube.m * std::log(2.0 * kPi);
  return r;
}

/// Strict convexity margin of t ↦ −ln|D_t| over a real grid.
inline MarginResult brunn_minkowski_margin(const ConvexFamily& family, const std::vector<RVec>& nodes,
                                           const FdScheme& fd, const QuadratureSpec& spec = {}) {
  RealField f = [&](const RVec& t) { return neg_log_volume(family, t, spec).value; };
  return strict_convex_margin(f, nodes, fd);
}

// ---------------------------------------------------------------------------
// Finsler metrics and the determinant line bundle

enum class FinslerKind { hermitian, torus, general };

struct FinslerMetric {
  int m = 1;
  std::function<double(const CVec& t, const CVec& v)> h;
  FinslerKind kind = FinslerKind::general;
  std::string name = "custom";
  std::map<std::string, double> params;
};

/// h_t(v) = e^{a|t|²} sqrt(v* G v).
inline FinslerMetric hermitian_finsler(const CMat& g, double growth = 0.0) {
  FinslerMetric f;
  f.m = static_cast<int>(g.rows());
  f.kind = FinslerKind::hermitian;
  f.name = "hermitian";
  f.params = {{"growth", growth}};
  f.h = [g, growth](const CVec& t, const CVec& v) {
    return std::exp(growth * t.squaredNorm()) * std::sqrt(std::max((v.adjoint() * g * v)(0).real(), 0.0));
  };
  return f;
}

/// h_t(v) = e^{a|t|²} Σ c_i |v_i|.
inline FinslerMetric l1_finsler(std::vector<double> weights, double growth = 0.0) {
  FinslerMetric f;
  f.m = static_cast<int>(weights.size());
  f.kind = FinslerKind::torus;
  f.name = "l1";
  f.params = {{"growth", growth}};
  f.h = [weights, growth](const CVec& t, const CVec& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += weights[static_cast<std::size_t>(i)] * std::abs(v(i));
    return std::exp(growth * t.squaredNorm()) * s;
  };
  return f;
}

/// Lebesgue measure of the unit ball {h_t ≤ 1} in polar form
/// μ₀ = ∫_{S^{2m−1}} R(ω)^{2m}/(2m) dσ, R = 1/h_t(ω), reduced by S¹.
inline QuadResult unit_ball_measure(const FinslerMetric& metric, const ParamPoint& t, const QuadratureSpec& spec = {}) {
  auto radius = [&](const CVec& w) {
    const double hv = metric.h(t.t, w);
    if (!(hv > 0.0) || !std::isfinite(hv)) throw DomainError("det_metric_norm: unit ball is unbounded or null");
    return 1.0 / hv;
  };
  if (metric.m == 1) {
    CVec one(1);
    one(0) = 1.0;
    const double r = radius(one);
    QuadResult q;
    q.value = kPi * r * r;
    q.error = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(q.value);
    q.strategy = Strategy::radial_exact_angle;
    return q;
  }
  if (metric.m != 2) throw DomainError("det_metric_norm: only rank m ≤ 2 is supported");
  std::function<detail::Acc<double>(int)> eval = [&](int order) {
    const GaussRule& rule = gauss_legendre(order);
    const int nd = metric.kind == FinslerKind::general || metric.kind == FinslerKind::hermitian ? order : 1;
    detail::Acc<double> acc;
    CVec w(2);
    for (std::size_t ic = 0; ic < rule.nodes.size(); ++ic) {
      const double chi = 0.25 * kPi * (1.0 + rule.nodes[ic]);
      const double wc = 0.25 * kPi * rule.weights[ic] * std::cos(chi) * std::sin(chi);
      for (int id = 0; id < nd; ++id) {
        const double delta = 2.0 * kPi * id / nd;
        w(0) = std::cos(chi);
        w(1) = std::polar(std::sin(chi), delta);
        const double r = radius(w);
        const double v = 2.0 * kPi * wc * (2.0 * kPi / nd) * std::pow(r, 4) / 4.0;
        acc.value += v;
        acc.magnitude += std::abs(v);
      }
    }
    return acc;
  };
  return detail::refine<double>(eval, spec, Strategy::shadow_tensor);
}

/// ‖e(t)‖²_{det h} = 1/μ₀(B_t).
inline ScalarResult det_metric_norm(const FinslerMetric& metric, const ParamPoint& t, const QuadratureSpec& spec = {}) {
  const QuadResult q = unit_ball_measure(metric, t, spec);
  const double mu = q.value.real();
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("det_metric_norm: unit ball has no positive finite measure");
  return {1.0 / mu, q.error / (mu * mu)};
}

/// Strict negativity of the determinant metric, reported as the strict psh
/// margin of t ↦ −ln μ₀(B_t) (positive = strictly negative curvature).
inline MarginResult det_metric_curvature(const FinslerMetric& metric, const ParamGrid& grid, const FdScheme& fd,
                                         const QuadratureSpec& spec = {}) {
  PointField f = [&](const CVec& t) { return -std::log(unit_ball_measure(metric, ParamPoint(t), spec).value.real()); };
  return strict_psh_margin(f, grid, fd);
}

/// Sampled check that ln h is plurisubharmonic off the zero section, in the
/// joint variables (t, v). Homogeneity makes ln h pluriharmonic along the
/// radial direction, so only non-strict positivity is testable.
inline PshCheck finsler_curvature_spot_check(const FinslerMetric& metric, const ParamBox& box, int samples = 16,
                                             std::uint64_t seed = 0xf1) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<CVec, CVec>> pts;
  for (int s = 0; s < samples; ++s) {
    CVec t = detail::random_param(box, rng);
    CVec v = detail::random_fiber(metric.m, 1.0, rng);
    if (v.norm() < 0.2) v(0) += 0.5;
    pts.emplace_back(t, v);
  }
  ScalarField lnh = [&](const CVec& t, const CVec& v) { return std::log(metric.h(t, v)); };
  return check_psh_hypothesis(lnh, pts, false, {1e-3, true});
}

/// Sampled homogeneity residual max |h(λv) − |λ|h(v)| / max(1, h(v)).
inline double finsler_homogeneity_residual(const FinslerMetric& metric, const ParamBox& box, int samples = 100,
                                           std::uint64_t seed = 0xab) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec t = detail::random_param(box, rng);
    CVec v = detail::random_fiber(metric.m, 1.0, rng);
    const cplx lambda(g(rng), g(rng));
    const double hv = metric.h(t, v);
    worst = std::max(worst, std::abs(metric.h(t, lambda * v) - std::abs(lambda) * hv) / std::max(1.0, hv));
  }
  return worst;
}

}  // namespace pshlab
