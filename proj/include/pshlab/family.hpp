#pragma once

// Fibered families of domains Ω ⊂ U × ℂᵐ and the weights living on them.
//
// A family carries two descriptions of its fibers: an implicit defining
// function ρ (ρ < 0 inside) used for hypothesis checks, and a
// symmetry-reduced fiber form used for integration.

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pshlab/grid.hpp"
#include "pshlab/hessian.hpp"

namespace pshlab {

enum class FamilyKind { hartogs_disk, shrinking_ball, reinhardt_shadow, ellipsoid_reinhardt, tube, product, custom };
enum class Symmetry { circular, reinhardt, tube, none };
enum class Invariance { s1, torus, tube, none };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::hartogs_disk: return "hartogs_disk";
    case FamilyKind::shrinking_ball: return "shrinking_ball";
    case FamilyKind::reinhardt_shadow: return "reinhardt_shadow";
    case FamilyKind::ellipsoid_reinhardt: return "ellipsoid_reinhardt";
    case FamilyKind::tube: return "tube";
    case FamilyKind::product: return "product";
    case FamilyKind::custom: return "custom";
  }
  return "?";
}

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::circular: return "circular";
    case Symmetry::reinhardt: return "reinhardt";
    case Symmetry::tube: return "tube";
    case Symmetry::none: return "none";
  }
  return "?";
}

inline const char* to_string(Invariance s) {
  switch (s) {
    case Invariance::s1: return "s1";
    case Invariance::torus: return "torus";
    case Invariance::tube: return "tube";
    case Invariance::none: return "none";
  }
  return "?";
}

/// Iterated limits lo_i(t, x_0..x_{i-1}) < x_i < hi_i(t, x_0..x_{i-1}).
/// Describes a Reinhardt shadow (x = moduli) or a tube base (x = Re z).
struct NestedLimits {
  int dim = 1;
  std::function<Interval(const CVec& t, int axis, std::span<const double> prefix)> limits;

  /// With `moduli` set, a zero coordinate counts as interior when the lower
  /// limit is ≤ 0 (the coordinate axis lies inside a Reinhardt fiber).
  bool contains(const CVec& t, std::span<const double> x, bool moduli = false) const {
    for (int i = 0; i < dim; ++i) {
      const Interval iv = limits(t, i, x.first(i));
      const bool above = x[i] > iv.lo || (moduli && x[i] == 0.0 && iv.lo <= 0.0);
      if (!(above && x[i] < iv.hi)) return false;
    }
    return true;
  }
};

/// Reinhardt fiber: the set of z with (|z_1|, …, |z_m|) in the shadow.
struct ShadowForm {
  NestedLimits shadow;
};

/// Circular fiber in ℂ² described by its boundary distance along each unit
/// direction ω = (cos χ, sin χ e^{iδ}) modulo the diagonal S¹ action.
struct StarForm {
  std::function<double(const CVec& t, double chi, double delta)> radius;
};

/// Tube fiber X_t + iℝᵐ with a bounded base X_t.
struct TubeForm {
  NestedLimits base;
};

using FiberForm = std::variant<ShadowForm, StarForm, TubeForm>;

struct DomainFamily {
  int n = 1;
  int m = 1;
  FamilyKind kind = FamilyKind::custom;
  ScalarField rho;
  FiberForm fiber;
  Symmetry symmetry = Symmetry::none;
  ParamBox param_box;
  /// Evaluation neighborhood: |z_i| ≤ z_bound and t within the box enlarged
  /// by `t_margin`.
  double z_bound = 2.0;
  double t_margin = 0.25;
  std::map<std::string, double> params;
  std::string oracle;

  bool is_tube() const { return std::holds_alternative<TubeForm>(fiber); }

  /// Membership predicate from the integration form.
  bool fiber_contains(const CVec& t, const CVec& z) const {
    return std::visit(
        [&](const auto& f) -> bool {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, ShadowForm>) {
            std::vector<double> r(m);
            for (int i = 0; i < m; ++i) r[i] = std::abs(z(i));
            return f.shadow.contains(t, r, true);
          } else if constexpr (std::is_same_v<T, TubeForm>) {
            std::vector<double> x(m);
            for (int i = 0; i < m; ++i) x[i] = z(i).real();
            return f.base.contains(t, x);
          } else {
            const double s = z.norm();
            if (s == 0.0) return f.radius(t, 0.0, 0.0) > 0.0;
            const double chi = std::atan2(std::abs(z(1)), std::abs(z(0)));
            const double delta = std::arg(z(1)) - std::arg(z(0));
            return s < f.radius(t, chi, delta);
          }
        },
        fiber);
  }
};

/// Weight φ(t, z) with its declared invariance and optional closed-form
/// complex Hessian in the joint variables (t, z).
struct WeightField {
  ScalarField phi;
  Invariance invariance = Invariance::none;
  std::function<ComplexHessian(const CVec& t, const CVec& z)> hessian;
  std::string name = "custom";
  bool identically_zero = false;
  std::map<std::string, double> params;

  double operator()(const CVec& t, const CVec& z) const { return identically_zero ? 0.0 : phi(t, z); }

  /// True when φ is invariant under every symmetry of `s`.
  bool respects(Symmetry s) const {
    if (identically_zero) return true;
    switch (s) {
      case Symmetry::reinhardt: return invariance == Invariance::torus;
      case Symmetry::circular: return invariance == Invariance::torus || invariance == Invariance::s1;
      case Symmetry::tube: return invariance == Invariance::tube;
      case Symmetry::none: return true;
    }
    return false;
  }

  static WeightField zero() {
    WeightField w;
    w.phi = [](const CVec&, const CVec&) { return 0.0; };
    w.invariance = Invariance::torus;
    w.identically_zero = true;
    w.name = "zero";
    w.hessian = [](const CVec& t, const CVec& z) {
      return ComplexHessian(CMat::Zero(t.size() + z.size(), t.size() + z.size()), t.size());
    };
    return w;
  }

  /// φ = a|t|² + Σ b_i |z_i|²; torus invariant.
  static WeightField quadratic(double a, std::vector<double> b) {
    WeightField w;
    w.name = "quadratic";
    w.invariance = Invariance::torus;
    w.params["a_t"] = a;
    for (std::size_t i = 0; i < b.size(); ++i) w.params["b_z" + std::to_string(i + 1)] = b[i];
    w.phi = [a, b](const CVec& t, const CVec& z) {
      double v = a * t.squaredNorm();
      for (Eigen::Index i = 0; i < z.size(); ++i) v += b[static_cast<std::size_t>(i) % b.size()] * std::norm(z(i));
      return v;
    };
    w.hessian = [a, b](const CVec& t, const CVec& z) {
      const Eigen::Index n = t.size(), m = z.size();
      CMat h = CMat::Zero(n + m, n + m);
      for (Eigen::Index j = 0; j < n; ++j) h(j, j) = a;
      for (Eigen::Index i = 0; i < m; ++i) h(n + i, n + i) = b[static_cast<std::size_t>(i) % b.size()];
      return ComplexHessian(h, n);
    };
    return w;
  }

  /// φ = c·|t_1 + z_1|²; rank-one Hessian, not S¹-invariant in z.
  static WeightField coupled(double c = 1.0) {
    WeightField w;
    w.name = "coupled";
    w.invariance = Invariance::none;
    w.params["c"] = c;
    w.phi = [c](const CVec& t, const CVec& z) { return c * std::norm(t(0) + z(0)); };
    w.hessian = [c](const CVec& t, const CVec& z) {
      const Eigen::Index n = t.size(), m = z.size();
      CMat h = CMat::Zero(n + m, n + m);
      h(0, 0) = h(0, n) = h(n, 0) = h(n, n) = c;
      return ComplexHessian(h, n);
    };
    return w;
  }

  /// φ = a (Re t)² + b |Re z|² + c Σ Re z_i; independent of Im z.
  static WeightField tube_polynomial(double a, double b, double c) {
    WeightField w;
    w.name = "tube_polynomial";
    w.invariance = Invariance::tube;
    w.params = {{"a_t", a}, {"b_x", b}, {"c_x", c}};
    w.phi = [a, b, c](const CVec& t, const CVec& z) {
      double v = 0.0;
      for (Eigen::Index j = 0; j < t.size(); ++j) v += a * t(j).real() * t(j).real();
      for (Eigen::Index i = 0; i < z.size(); ++i) v += b * z(i).real() * z(i).real() + c * z(i).real();
      return v;
    };
    w.hessian = [a, b](const CVec& t, const CVec& z) {
      const Eigen::Index n = t.size(), m = z.size();
      CMat h = CMat::Zero(n + m, n + m);
      for (Eigen::Index j = 0; j < n; ++j) h(j, j) = 0.5 * a;
      for (Eigen::Index i = 0; i < m; ++i) h(n + i, n + i) = 0.5 * b;
      return ComplexHessian(h, n);
    };
    return w;
  }
};

// ---------------------------------------------------------------------------
// Built-in families

namespace detail {

inline double radial_profile(const CVec& t, double radius, double decay) {
  return radius * std::exp(-decay * t.squaredNorm());
}

// Nested limits of the ball of radius R(t) in modulus coordinates.
inline NestedLimits ball_shadow(int m, std::function<double(const CVec&)> radius) {
  NestedLimits nl;
  nl.dim = m;
  nl.limits = [radius = std::move(radius)](const CVec& t, int, std::span<const double> prefix) {
    double r2 = radius(t) * radius(t);
    for (double x : prefix) r2 -= x * x;
    return Interval{0.0, std::sqrt(std::max(r2, 0.0))};
  };
  return nl;
}

}  // namespace detail

/// Disk of radius R·e^{−c|t|²} over U; ρ = |z|² e^{2c|t|²}/R² − 1.
inline DomainFamily hartogs_disk(double radius = 1.0, double decay = 1.0, ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::hartogs_disk;
  f.n = box.dim();
  f.m = 1;
  f.symmetry = Symmetry::reinhardt;
  f.param_box = std::move(box);
  f.params = {{"radius", radius}, {"decay", decay}};
  f.rho = [radius, decay](const CVec& t, const CVec& z) {
    return z.squaredNorm() * std::exp(2.0 * decay * t.squaredNorm()) / (radius * radius) - 1.0;
  };
  f.fiber = ShadowForm{detail::ball_shadow(1, [radius, decay](const CVec& t) {
    return detail::radial_profile(t, radius, decay);
  })};
  f.z_bound = 2.0 * radius;
  f.oracle = "|Ω_t| = π R² e^{−2c|t|²}; ψ_k(t) = (2k+2)c|t|² + ln((k+1)/(π R^{2k+2}))";
  return f;
}

/// Ball of radius R·e^{−c|t|²} in ℂᵐ.
inline DomainFamily shrinking_ball(int m = 2, double radius = 1.0, double decay = 1.0,
                                   ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::shrinking_ball;
  f.n = box.dim();
  f.m = m;
  f.symmetry = Symmetry::reinhardt;
  f.param_box = std::move(box);
  f.params = {{"m", m}, {"radius", radius}, {"decay", decay}};
  f.rho = [radius, decay](const CVec& t, const CVec& z) {
    return z.squaredNorm() * std::exp(2.0 * decay * t.squaredNorm()) / (radius * radius) - 1.0;
  };
  f.fiber = ShadowForm{detail::ball_shadow(m, [radius, decay](const CVec& t) {
    return detail::radial_profile(t, radius, decay);
  })};
  f.z_bound = 2.0 * radius;
  f.oracle = "∫|z^α|² = πᵐ α! r(t)^{2m+2|α|}/(m+|α|)!, r(t) = R e^{−c|t|²}; Nakano margin (2|α|+2m)c";
  return f;
}

/// Polyannulus a_i e^{g|t|²} < |z_i| < b_i e^{−c|t|²}; inner radii may be 0.
inline DomainFamily reinhardt_shadow(std::vector<double> inner, std::vector<double> outer, double decay = 1.0,
                                     double growth = 0.0, ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::reinhardt_shadow;
  f.n = box.dim();
  f.m = static_cast<int>(outer.size());
  f.symmetry = Symmetry::reinhardt;
  f.param_box = std::move(box);
  for (int i = 0; i < f.m; ++i) {
    f.params["inner" + std::to_string(i + 1)] = inner[i];
    f.params["outer" + std::to_string(i + 1)] = outer[i];
  }
  f.params["decay"] = decay;
  f.params["growth"] = growth;
  auto lim = [inner, outer, decay, growth](const CVec& t, int axis) {
    const double s = t.squaredNorm();
    return Interval{inner[axis] * std::exp(growth * s), outer[axis] * std::exp(-decay * s)};
  };
  f.rho = [lim, m = f.m](const CVec& t, const CVec& z) {
    double worst = -1e300;
    for (int i = 0; i < m; ++i) {
      const Interval iv = lim(t, i);
      const double r2 = std::norm(z(i));
      const double b2 = iv.hi * iv.hi, a2 = iv.lo * iv.lo;
      const double v = iv.lo > 0.0 ? (r2 - a2) * (r2 - b2) / (b2 * b2) : r2 / b2 - 1.0;
      worst = std::max(worst, v);
    }
    return worst;
  };
  NestedLimits nl;
  nl.dim = f.m;
  nl.limits = [lim](const CVec& t, int axis, std::span<const double>) { return lim(t, axis); };
  f.fiber = ShadowForm{nl};
  double zb = 0.0;
  for (double b : outer) zb = std::max(zb, b);
  f.z_bound = 2.0 * zb;
  f.oracle = "m=1: ∫|z^k|² = π(b(t)^{2k+2} − a(t)^{2k+2})/(k+1), k ≠ −1; 2π ln(b/a) for k = −1";
  return f;
}

/// Ellipsoid Σ |z_i|²/A_i(t)² < 1 with A_i(t) = a_i e^{−c|t|²}.
inline DomainFamily ellipsoid_reinhardt(std::vector<double> axes, double decay = 1.0,
                                        ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::ellipsoid_reinhardt;
  f.n = box.dim();
  f.m = static_cast<int>(axes.size());
  f.symmetry = Symmetry::reinhardt;
  f.param_box = std::move(box);
  for (int i = 0; i < f.m; ++i) f.params["axis" + std::to_string(i + 1)] = axes[i];
  f.params["decay"] = decay;
  f.rho = [axes, decay](const CVec& t, const CVec& z) {
    const double e = std::exp(2.0 * decay * t.squaredNorm());
    double v = -1.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) v += std::norm(z(i)) * e / (axes[i] * axes[i]);
    return v;
  };
  NestedLimits nl;
  nl.dim = f.m;
  nl.limits = [axes, decay](const CVec& t, int axis, std::span<const double> prefix) {
    const double s = std::exp(-decay * t.squaredNorm());
    double rem = 1.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) rem -= std::pow(prefix[i] / (axes[i] * s), 2);
    return Interval{0.0, axes[axis] * s * std::sqrt(std::max(rem, 0.0))};
  };
  f.fiber = ShadowForm{nl};
  double zb = 0.0;
  for (double a : axes) zb = std::max(zb, a);
  f.z_bound = 2.0 * zb;
  f.oracle = "∫|z^α|² = πᵐ α! Π A_i(t)^{2α_i+2}/(m+|α|)!";
  return f;
}

/// Tube X_t + iℝᵐ with X_t = {x : |x|² < R² − s|Re t|²}.
inline DomainFamily tube_family(int m = 1, double radius = 1.0, double coupling = 0.0,
                                ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::tube;
  f.n = box.dim();
  f.m = m;
  f.symmetry = Symmetry::tube;
  f.param_box = std::move(box);
  f.params = {{"m", m}, {"radius", radius}, {"coupling", coupling}};
  auto re2 = [](const CVec& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i).real() * v(i).real();
    return s;
  };
  f.rho = [radius, coupling, re2](const CVec& t, const CVec& z) {
    return re2(z) + coupling * re2(t) - radius * radius;
  };
  NestedLimits nl;
  nl.dim = m;
  nl.limits = [radius, coupling, re2](const CVec& t, int, std::span<const double> prefix) {
    double w2 = radius * radius - coupling * re2(t);
    for (double x : prefix) w2 -= x * x;
    const double w = std::sqrt(std::max(w2, 0.0));
    return Interval{-w, w};
  };
  f.fiber = TubeForm{nl};
  f.z_bound = 1e6;
  f.oracle = "|X_t| = vol of the m-ball of radius sqrt(R² − s|Re t|²)";
  return f;
}

/// t-independent ball of radius R in ℂᵐ (flat control).
inline DomainFamily product_family(int m = 1, double radius = 1.0, ParamBox box = ParamBox::square(1, 0.5)) {
  DomainFamily f;
  f.kind = FamilyKind::product;
  f.n = box.dim();
  f.m = m;
  f.symmetry = Symmetry::reinhardt;
  f.param_box = std::move(box);
  f.params = {{"m", m}, {"radius", radius}};
  f.rho = [radius](const CVec&, const CVec& z) { return z.squaredNorm() / (radius * radius) - 1.0; };
  f.fiber = ShadowForm{detail::ball_shadow(m, [radius](const CVec&) { return radius; })};
  f.z_bound = 2.0 * radius;
  f.oracle = "Gram matrix constant in t; curvature identically 0";
  return f;
}

/// Circular, non-Reinhardt fiber in ℂ²: {z*Qz < R(t)²}, Q = [[1, b/2], [b/2, 1]],
/// R(t) = R e^{−c|t|²}. Built as a custom family with a star-shaped form.
inline DomainFamily circular_ellipsoid(double coupling, double radius = 1.0, double decay = 1.0,
                                       ParamBox box = ParamBox::square(1, 0.5)) {
  if (!(std::abs(coupling) < 2.0)) throw DomainError("circular_ellipsoid: |coupling| must be < 2");
  DomainFamily f;
  f.kind = FamilyKind::custom;
  f.n = box.dim();
  f.m = 2;
  f.symmetry = Symmetry::circular;
  f.param_box = std::move(box);
  f.params = {{"coupling", coupling}, {"radius", radius}, {"decay", decay}};
  auto quad = [coupling](const CVec& z) {
    return std::norm(z(0)) + std::norm(z(1)) + coupling * (z(0) * std::conj(z(1))).real();
  };
  f.rho = [quad, radius, decay](const CVec& t, const CVec& z) {
    return quad(z) * std::exp(2.0 * decay * t.squaredNorm()) / (radius * radius) - 1.0;
  };
  f.fiber = StarForm{[coupling, radius, decay](const CVec& t, double chi, double delta) {
    const double q = 1.0 + coupling * std::cos(chi) * std::sin(chi) * std::cos(delta);
    return detail::radial_profile(t, radius, decay) / std::sqrt(q);
  }};
  f.z_bound = 2.0 * radius / std::sqrt(1.0 - 0.5 * std::abs(coupling));
  f.oracle = "∫ z_a z̄_b = (π² R(t)⁶/6)(Q⁻¹)_{ab}/det Q";
  return f;
}

// ---------------------------------------------------------------------------
// Operations

/// Defining function ρ(t, z); throws DomainError outside the evaluation
/// neighborhood of the closure of Ω.
inline double eval_rho(const DomainFamily& family, const ParamPoint& t, const FiberPoint& z) {
  if (t.dim() != family.n || z.dim() != family.m)
    throw DomainError("eval_rho: dimension mismatch (expected n=" + std::to_string(family.n) +
                      ", m=" + std::to_string(family.m) + ")");
  if (!all_finite(t.t) || !all_finite(z.z)) throw DomainError("eval_rho: non-finite coordinates");
  if (!family.param_box.contains(t.t, family.t_margin * std::max(family.param_box.width(), 1.0)))
    throw DomainError("eval_rho: parameter point outside evaluation neighborhood " + format_point(t.t));
  for (Eigen::Index i = 0; i < z.z.size(); ++i)
    if (std::abs(z.z(i)) > family.z_bound)
      throw DomainError("eval_rho: fiber point outside evaluation neighborhood " + format_point(z.z));
  return family.rho(t.t, z.z);
}

struct SymmetryReport {
  double rho_deviation = 0.0;
  double phi_deviation = 0.0;
  double tolerance = 1e-12;
  bool pass = true;
};

namespace detail {

inline double random_in(const Interval& i, std::mt19937_64& rng) {
  if (!(i.width() > 0.0)) return i.lo;
  return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
}

inline CVec random_param(const ParamBox& box, std::mt19937_64& rng) {
  CVec t(box.dim());
  for (int j = 0; j < box.dim(); ++j) {
    const double re = random_in(box.re[j], rng);
    t(j) = cplx(re, random_in(box.im[j], rng));
  }
  return t;
}

inline CVec random_fiber(int m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-bound / std::sqrt(2.0), bound / std::sqrt(2.0));
  CVec z(m);
  for (int i = 0; i < m; ++i) z(i) = cplx(u(rng), u(rng));
  return z;
}

inline double sample_bound(const DomainFamily& f) { return f.is_tube() ? 4.0 : f.z_bound; }

}  // namespace detail

/// Maximum deviation of ρ and φ under the family's declared symmetry group on
/// random samples; scaled by max(1, |value|).
inline SymmetryReport check_symmetry(const DomainFamily& family, const WeightField& weight, int samples,
                                     std::uint64_t seed = 0x5eed, double tolerance = 1e-12) {
  if (samples < 1) throw DomainError("check_symmetry: samples must be ≥ 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SymmetryReport rep;
  rep.tolerance = tolerance;
  auto dev = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
  for (int s = 0; s < samples; ++s) {
    CVec t = detail::random_param(family.param_box, rng);
    CVec z = detail::random_fiber(family.m, detail::sample_bound(family), rng);
    CVec zr = z;
    switch (family.symmetry) {
      case Symmetry::circular: zr *= std::polar(1.0, angle(rng)); break;
      case Symmetry::reinhardt:
        for (int i = 0; i < family.m; ++i) zr(i) *= std::polar(1.0, angle(rng));
        break;
      case Symmetry::tube:
        for (int i = 0; i < family.m; ++i) zr(i) += cplx(0.0, 10.0 * gauss(rng));
        break;
      case Symmetry::none: break;
    }
    rep.rho_deviation = std::max(rep.rho_deviation, dev(family.rho(t, z), family.rho(t, zr)));
    if (!weight.identically_zero && weight.invariance != Invariance::none) {
      CVec zw = z;
      switch (weight.invariance) {
        case Invariance::s1: zw *= std::polar(1.0, angle(rng)); break;
        case Invariance::torus:
          for (int i = 0; i < family.m; ++i) zw(i) *= std::polar(1.0, angle(rng));
          break;
        case Invariance::tube:
          for (int i = 0; i < family.m; ++i) zw(i) += cplx(0.0, 10.0 * gauss(rng));
          break;
        case Invariance::none: break;
      }
      rep.phi_deviation = std::max(rep.phi_deviation, dev(weight(t, z), weight(t, zw)));
    }
  }
  rep.pass = rep.rho_deviation <= tolerance && rep.phi_deviation <= tolerance;
  return rep;
}

struct PshCheck {
  double margin = 0.0;
  double error_estimate = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Minimum eigenvalue over `samples` of the finite-difference complex Hessian
/// of `field` in all variables (t, z) jointly. Strict mode passes iff the
/// margin exceeds `eps_strict`; otherwise iff it is ≥ −(error estimate).
inline PshCheck check_psh_hypothesis(const ScalarField& field, const std::vector<std::pair<CVec, CVec>>& samples,
                                     bool strict, const FdScheme& scheme = {1e-3, true},
                                     std::optional<double> eps_strict = std::nullopt) {
  PshCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  for (const auto& [t, z] : samples) {
    FdHessianResult r = complex_hessian_fd(field, t, z, scheme);
    if (!r.hessian.full.allFinite()) throw NumericError("check_psh_hypothesis: non-finite Hessian entries");
    out.margin = std::min(out.margin, min_eigenvalue(r.hessian.full));
    out.error_estimate = std::max(out.error_estimate, r.error_estimate);
  }
  out.threshold = strict ? eps_strict.value_or(10.0 * out.error_estimate) : -out.error_estimate;
  out.pass = strict ? out.margin > out.threshold : out.margin >= out.threshold;
  return out;
}

/// Checks the structural hypotheses of a family: bounded nonempty fibers over
/// the parameter box (plus `margin`), membership consistency between ρ and the
/// fiber form, and exact symmetry of ρ. Throws ConfigError on failure.
inline void validate_family(const DomainFamily& family, int samples = 1000, double margin = 0.0,
                            std::uint64_t seed = 0xfa11) {
  if (family.n < 1) throw ConfigError("family.n", "must be ≥ 1");
  if (family.m < 1) throw ConfigError("family.m", "must be ≥ 1");
  if (family.param_box.dim() != family.n) throw ConfigError("grid", "parameter box dimension differs from n");
  if (!family.rho) throw ConfigError("family.rho", "missing defining function");
  if (std::holds_alternative<StarForm>(family.fiber) && family.m != 2)
    throw ConfigError("family.fiber", "star-shaped circular fibers are supported for m = 2 only");
  std::mt19937_64 rng(seed);
  ParamBox probe = family.param_box;
  for (auto& i : probe.re) i = {i.lo - margin, i.hi + margin};
  for (auto& i : probe.im) {
    if (i.width() > 0.0) i = {i.lo - margin, i.hi + margin};
  }
  std::vector<CVec> corners;
  corners.push_back(probe.center());
  for (int s = 0; s < 64; ++s) corners.push_back(detail::random_param(probe, rng));
  for (const CVec& t : corners) {
    std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, StarForm>) {
            for (double chi : {0.0, 0.4, 0.8, 1.2, 1.5}) {
              for (double d : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
                const double r = f.radius(t, chi, d);
                if (!(r > 1e-9) || !std::isfinite(r))
                  throw ConfigError("family", "degenerate or unbounded fiber at t=" + format_point(t));
              }
            }
          } else {
            const NestedLimits& nl = [&]() -> const NestedLimits& {
              if constexpr (std::is_same_v<T, ShadowForm>) return f.shadow;
              else return f.base;
            }();
            std::vector<double> prefix;
            for (int a = 0; a < nl.dim; ++a) {
              const Interval iv = nl.limits(t, a, prefix);
              if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
                throw ConfigError("family", "unbounded fiber at t=" + format_point(t));
              if (!(iv.width() > 1e-9))
                throw ConfigError("family", "empty or measure-zero fiber at t=" + format_point(t));
              prefix.push_back(iv.mid());
            }
          }
        },
        family.fiber);
  }
  // ρ and the fiber form must agree on membership away from the boundary.
  const double bound = detail::sample_bound(family);
  int mismatches = 0;
  for (int s = 0; s < samples; ++s) {
    CVec t = detail::random_param(family.param_box, rng);
    CVec z = detail::random_fiber(family.m, bound, rng);
    const double r = family.rho(t, z);
    if (std::abs(r) < 1e-9) continue;
    if ((r < 0.0) != family.fiber_contains(t, z)) ++mismatches;
  }
  if (mismatches > 0)
    throw ConfigError("family.rho", std::to_string(mismatches) + " samples disagree between ρ and the fiber form");
  const SymmetryReport sym = check_symmetry(family, WeightField::zero(), 200, seed + 1);
  if (!sym.pass)
    throw ConfigError("family.symmetry", std::string("declared ") + to_string(family.symmetry) +
                                             " symmetry violated (deviation " + std::to_string(sym.rho_deviation) + ")");
}

}  // namespace pshlab
