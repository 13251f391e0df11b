#pragma once

// Fiber integrals over symmetry-reduced domains.
//
// Angular integrals against characters are resolved by orthogonality and never
// evaluated numerically on symmetric fibers; the remaining radial, shadow or
// tube-base integrals use tensor Gauss–Legendre rules. Every result carries an
// error estimate from one dyadic refinement of the order.

#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "pshlab/family.hpp"

namespace pshlab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss–Legendre rule with `order` points on [-1, 1] (Newton iteration on
/// the three-term recurrence). Rules are cached per order.
inline const GaussRule& gauss_legendre(int order) {
  if (order < 2) throw DomainError("gauss_legendre: order must be ≥ 2");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
    }
    dp = order * (x * p1 - p2) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

/// Exponent vector of a monomial z^α.
struct MultiIndex {
  std::vector<int> alpha;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> a) : alpha(std::move(a)) {}
  MultiIndex(std::initializer_list<int> a) : alpha(a) {}

  int size() const { return static_cast<int>(alpha.size()); }
  int degree() const { return std::accumulate(alpha.begin(), alpha.end(), 0); }
  int operator[](int i) const { return alpha[static_cast<std::size_t>(i)]; }
  bool has_negative() const {
    for (int a : alpha)
      if (a < 0) return true;
    return false;
  }
  auto operator<=>(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
    return s + ")";
  }
};

/// z^α (negative exponents allowed off the axes).
inline cplx monomial(const MultiIndex& a, const CVec& z) {
  cplx v = 1.0;
  for (int i = 0; i < a.size(); ++i) v *= std::pow(z(i), a[i]);
  return v;
}

enum class Strategy { radial_exact_angle, shadow_tensor, tube_base, box_fallback, exact_zero };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::radial_exact_angle: return "radial_exact_angle";
    case Strategy::shadow_tensor: return "shadow_tensor";
    case Strategy::tube_base: return "tube_base";
    case Strategy::box_fallback: return "box_fallback";
    case Strategy::exact_zero: return "exact_zero";
  }
  return "?";
}

struct QuadratureSpec {
  int order = 64;          // Gauss–Legendre points per radial/base axis
  int angular_order = 16;  // trapezoid points per angle on the fallback path
  bool refine = true;      // one dyadic refinement for the error estimate
  double tolerance = 1e-8; // relative accuracy that triggers a warning when exceeded
};

struct QuadResult {
  cplx value = 0.0;
  double error = 0.0;
  Strategy strategy = Strategy::exact_zero;
  bool accuracy_warning = false;
};

namespace detail {

template <class T>
struct Acc {
  T value{};
  double magnitude = 0.0;
};

// Tensor Gauss–Legendre over nested limits; `f` receives the coordinates.
template <class T, class F>
Acc<T> nested_gl(const NestedLimits& nl, const CVec& t, int order, const F& f) {
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> x(static_cast<std::size_t>(nl.dim));
  Acc<T> acc;
  auto rec = [&](auto&& self, int axis, double jac) -> void {
    const Interval iv = nl.limits(t, axis, std::span<const double>(x.data(), static_cast<std::size_t>(axis)));
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw DomainError("quadrature: unbounded fiber limits");
    if (iv.hi <= iv.lo) return;
    const double half = 0.5 * iv.width(), mid = iv.mid();
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      x[static_cast<std::size_t>(axis)] = mid + half * rule.nodes[k];
      const double w = jac * half * rule.weights[k];
      if (axis + 1 == nl.dim) {
        const T v = f(std::span<const double>(x));
        acc.value += w * v;
        acc.magnitude += w * std::abs(v);
      } else {
        self(self, axis + 1, w);
      }
    }
  };
  rec(rec, 0, 1.0);
  return acc;
}

template <class T>
QuadResult refine(const std::function<Acc<T>(int)>& eval, const QuadratureSpec& spec, Strategy s) {
  QuadResult r;
  r.strategy = s;
  const Acc<T> coarse = eval(spec.order);
  if (!spec.refine) {
    r.value = coarse.value;
    r.error = 64.0 * std::numeric_limits<double>::epsilon() * coarse.magnitude;
    return r;
  }
  const Acc<T> fine = eval(2 * spec.order);
  r.value = fine.value;
  r.error = std::abs(cplx(fine.value) - cplx(coarse.value)) +
            64.0 * std::numeric_limits<double>::epsilon() * std::max(fine.magnitude, coarse.magnitude);
  if (!std::isfinite(std::abs(r.value))) throw NumericError("quadrature: non-finite integral");
  r.accuracy_warning = r.error > spec.tolerance * std::max(std::abs(r.value), 1e-300) && r.error > 1e-300;
  return r;
}

inline void require_axis_free(const NestedLimits& nl, const CVec& t, const MultiIndex& a, const MultiIndex& b) {
  std::vector<double> x;
  for (int i = 0; i < nl.dim; ++i) {
    const Interval iv = nl.limits(t, i, x);
    if ((a[i] < 0 || b[i] < 0) && !(iv.lo > 0.0))
      throw DomainError("weighted_monomial_integral: negative exponent on a fiber touching the z" +
                        std::to_string(i + 1) + " axis");
    x.push_back(iv.mid());
  }
}

inline void check_indices(const DomainFamily& f, const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != f.m || b.size() != f.m) throw DomainError("multi-index length differs from fiber dimension");
}

}  // namespace detail

/// ∫_{Ω_t} g(z) dλ(z) for an arbitrary integrand, with angles resolved by
/// the trapezoid rule. Used where no symmetry reduction applies.
inline QuadResult integrate_over_fiber(const DomainFamily& family, const CVec& t,
                                       const std::function<cplx(const CVec& z)>& g, const QuadratureSpec& spec) {
  const int m = family.m;
  if (family.is_tube()) throw DomainError("integrate_over_fiber: tube fibers are unbounded");
  std::function<detail::Acc<cplx>(int)> eval;
  if (const auto* sh = std::get_if<ShadowForm>(&family.fiber)) {
    eval = [&, sh](int order) {
      const int na = std::max(4, spec.angular_order * order / spec.order);
      const int total = static_cast<int>(std::pow(na, m));
      return detail::nested_gl<cplx>(sh->shadow, t, order, [&](std::span<const double> r) {
        cplx sum = 0.0;
        CVec z(m);
        for (int code = 0; code < total; ++code) {
          int c = code;
          double jac = 1.0;
          for (int i = 0; i < m; ++i) {
            const double th = 2.0 * kPi * (c % na) / na;
            c /= na;
            z(i) = std::polar(r[i], th);
            jac *= r[i];
          }
          sum += jac * g(z);
        }
        return sum * std::pow(2.0 * kPi / na, m);
      });
    };
  } else {
    const auto& star = std::get<StarForm>(family.fiber);
    eval = [&](int order) {
      const GaussRule& rule = gauss_legendre(order);
      const int na = std::max(4, spec.angular_order * order / spec.order);
      detail::Acc<cplx> acc;
      CVec z(2);
      for (std::size_t ic = 0; ic < rule.nodes.size(); ++ic) {
        const double chi = 0.25 * kPi * (1.0 + rule.nodes[ic]);
        const double wc = 0.25 * kPi * rule.weights[ic];
        for (int i1 = 0; i1 < na; ++i1) {
          for (int i2 = 0; i2 < na; ++i2) {
            const double th1 = 2.0 * kPi * i1 / na, th2 = 2.0 * kPi * i2 / na;
            const double rad = star.radius(t, chi, th2 - th1);
            for (std::size_t is = 0; is < rule.nodes.size(); ++is) {
              const double s = 0.5 * rad * (1.0 + rule.nodes[is]);
              const double ws = 0.5 * rad * rule.weights[is];
              z(0) = std::polar(s * std::cos(chi), th1);
              z(1) = std::polar(s * std::sin(chi), th2);
              const double w = wc * ws * s * s * s * std::cos(chi) * std::sin(chi) * std::pow(2.0 * kPi / na, 2);
              const cplx v = g(z);
              acc.value += w * v;
              acc.magnitude += w * std::abs(v);
            }
          }
        }
      }
      return acc;
    };
  }
  return detail::refine<cplx>(eval, spec, Strategy::box_fallback);
}

/// ∫_{Ω_t} z^α z̄^β e^{−φ_t} dλ. Exactly zero by character orthogonality when
/// the symmetry forbids the pairing (α ≠ β on Reinhardt data, |α| ≠ |β| on
/// circular data).
inline QuadResult weighted_monomial_integral(const DomainFamily& family, const WeightField& weight,
                                             const ParamPoint& tp, const MultiIndex& alpha,
                                             const MultiIndex& beta, const QuadratureSpec& spec = {}) {
  detail::check_indices(family, alpha, beta);
  const CVec& t = tp.t;
  const int m = family.m;
  if (family.is_tube()) throw DomainError("weighted_monomial_integral: tube fibers are unbounded; use tube_base_integral");
  const bool reinhardt = family.symmetry == Symmetry::reinhardt && weight.respects(Symmetry::reinhardt);
  const bool circular = (family.symmetry == Symmetry::reinhardt || family.symmetry == Symmetry::circular) &&
                        weight.respects(Symmetry::circular);
  if (const auto* sh = std::get_if<ShadowForm>(&family.fiber)) detail::require_axis_free(sh->shadow, t, alpha, beta);
  else if (alpha.has_negative() || beta.has_negative())
    throw DomainError("weighted_monomial_integral: negative exponent on a fiber containing the origin");

  if ((circular && alpha.degree() != beta.degree()) || (reinhardt && alpha != beta)) {
    QuadResult zero;
    zero.strategy = Strategy::exact_zero;
    return zero;
  }
  if (reinhardt) {
    const auto& sh = std::get<ShadowForm>(family.fiber);
    const Strategy s = m == 1 ? Strategy::radial_exact_angle : Strategy::shadow_tensor;
    const double angular = std::pow(2.0 * kPi, m);
    std::function<detail::Acc<double>(int)> eval = [&](int order) {
      CVec z(m);
      auto acc = detail::nested_gl<double>(sh.shadow, t, order, [&](std::span<const double> r) {
        double v = 1.0;
        for (int i = 0; i < m; ++i) {
          v *= std::pow(r[i], 2 * alpha[i] + 1);
          z(i) = r[i];
        }
        return weight.identically_zero ? v : v * std::exp(-weight(t, z));
      });
      acc.value *= angular;
      acc.magnitude *= angular;
      return acc;
    };
    return detail::refine<double>(eval, spec, s);
  }
  if (circular && std::holds_alternative<StarForm>(family.fiber)) {
    // z = s(cos χ, sin χ e^{iδ}) e^{iθ}; the θ-integral gives 2π and the
    // character e^{i(α₂−β₂)δ} remains.
    const auto& star = std::get<StarForm>(family.fiber);
    const int p = alpha.degree() + beta.degree() + 3;
    const int a1 = alpha[0] + beta[0], a2 = alpha[1] + beta[1];
    const int d = alpha[1] - beta[1];
    std::function<detail::Acc<cplx>(int)> eval = [&](int order) {
      const GaussRule& rule = gauss_legendre(order);
      const int nd = order;
      detail::Acc<cplx> acc;
      CVec z(2);
      for (std::size_t ic = 0; ic < rule.nodes.size(); ++ic) {
        const double chi = 0.25 * kPi * (1.0 + rule.nodes[ic]);
        const double c = std::cos(chi), sn = std::sin(chi);
        const double wc = 0.25 * kPi * rule.weights[ic] * std::pow(c, a1 + 1) * std::pow(sn, a2 + 1);
        for (int id = 0; id < nd; ++id) {
          const double delta = 2.0 * kPi * id / nd;
          const double rad = star.radius(t, chi, delta);
          double radial = 0.0, radial_abs = 0.0;
          if (weight.identically_zero) {
            radial = radial_abs = std::pow(rad, p + 1) / (p + 1);
          } else {
            for (std::size_t is = 0; is < rule.nodes.size(); ++is) {
              const double s = 0.5 * rad * (1.0 + rule.nodes[is]);
              z(0) = s * c;
              z(1) = std::polar(s * sn, delta);
              const double v = 0.5 * rad * rule.weights[is] * std::pow(s, p) * std::exp(-weight(t, z));
              radial += v;
              radial_abs += std::abs(v);
            }
          }
          const double w = 2.0 * kPi * wc * (2.0 * kPi / nd);
          acc.value += w * radial * std::polar(1.0, d * delta);
          acc.magnitude += w * radial_abs;
        }
      }
      return acc;
    };
    return detail::refine<cplx>(eval, spec, Strategy::box_fallback);
  }
  return integrate_over_fiber(
      family, t,
      [&](const CVec& z) { return monomial(alpha, z) * std::conj(monomial(beta, z)) * std::exp(-weight(t, z)); }, spec);
}

/// Lebesgue measure |Ω_t| (same code path as the (0,0) weighted integral).
inline QuadResult fiber_volume(const DomainFamily& family, const ParamPoint& t, const QuadratureSpec& spec = {}) {
  if (family.is_tube()) throw DomainError("fiber_volume: tube fibers have infinite measure; use the base volume");
  const MultiIndex zero(std::vector<int>(static_cast<std::size_t>(family.m), 0));
  return weighted_monomial_integral(family, WeightField::zero(), t, zero, zero, spec);
}

/// ∫_{X_t} e^{−φ(t, x)} dλ_x over the real base of a tube fiber.
inline QuadResult tube_base_integral(const DomainFamily& family, const WeightField& weight, const ParamPoint& tp,
                                     const QuadratureSpec& spec = {}) {
  const auto* tube = std::get_if<TubeForm>(&family.fiber);
  if (!tube || family.symmetry != Symmetry::tube) throw DomainError("tube_base_integral: family is not a tube family");
  if (!weight.respects(Symmetry::tube)) throw DomainError("tube_base_integral: weight depends on Im z");
  const CVec& t = tp.t;
  const int m = family.m;
  std::function<detail::Acc<double>(int)> eval = [&](int order) {
    CVec z(m);
    return detail::nested_gl<double>(tube->base, t, order, [&](std::span<const double> x) {
      for (int i = 0; i < m; ++i) z(i) = x[i];
      return weight.identically_zero ? 1.0 : std::exp(-weight(t, z));
    });
  };
  return detail::refine<double>(eval, spec, Strategy::tube_base);
}

}  // namespace pshlab
