#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pshlab/grid.hpp"
#include "pshlab/hessian.hpp"
#include "pshlab/quadrature.hpp"

namespace pshlab {

/// Smoothing widths of the regularized maximum. The kernel is the
/// normalized bump (315/256)(1 − h²)⁴ on [−1, 1].
struct RegMaxParams {
  double eta1 = 1.0;
  double eta2 = 1.0;
  int kernel_order = 32;
};

namespace detail {

inline constexpr double kBumpNorm = 315.0 / 256.0;

inline double bump(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return kBumpNorm * u * u * u * u;
}

// ∫_{−1}^{s} bump
inline double bump_cdf(double s) {
  s = std::clamp(s, -1.0, 1.0);
  auto p = [](double x) {
    const double x2 = x * x;
    return x * (1.0 + x2 * (-4.0 / 3.0 + x2 * (6.0 / 5.0 + x2 * (-4.0 / 7.0 + x2 / 9.0))));
  };
  return kBumpNorm * (p(s) - p(-1.0));
}

// ∫_{−1}^{s} x·bump(x) dx
inline double bump_first_moment(double s) {
  s = std::clamp(s, -1.0, 1.0);
  const double u = 1.0 - s * s;
  return -kBumpNorm * u * u * u * u * u / 10.0;
}

// ∫ max(a, t2 + η2 s) bump(s) ds, in closed form.
inline double smoothed_inner(double a, double t2, double eta2) {
  const double s_star = std::clamp((a - t2) / eta2, -1.0, 1.0);
  const double k0 = bump_cdf(s_star);
  return a * k0 + t2 * (1.0 - k0) - eta2 * bump_first_moment(s_star);
}

}  // namespace detail

/// max_η(t1, t2) = ∫∫ max(t1 + h1, t2 + h2) η1⁻¹ψ(h1/η1) η2⁻¹ψ(h2/η2) dh.
/// The inner integral is exact; the outer one is piecewise polynomial and is
/// integrated by Gauss–Legendre on each piece between its breakpoints.
inline double reg_max(const RegMaxParams& p, double t1, double t2) {
  if (!(p.eta1 > 0.0) || !(p.eta2 > 0.0)) throw DomainError("reg_max: η must be positive");
  std::vector<double> cuts = {-1.0, 1.0};
  for (double sgn : {-1.0, 1.0}) {
    const double b = (t2 - t1 + sgn * p.eta2) / p.eta1;
    if (b > -1.0 && b < 1.0) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = gauss_legendre(std::max(p.kernel_order, 2));
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    if (hi <= lo) continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = mid + half * rule.nodes[k];
      total += half * rule.weights[k] * detail::bump(s) * detail::smoothed_inner(t1 + p.eta1 * s, t2, p.eta2);
    }
  }
  return total;
}

/// Pointwise max_η{u1, u2}.
inline PointField reg_max_compose(const RegMaxParams& p, PointField u1, PointField u2) {
  return [p, u1 = std::move(u1), u2 = std::move(u2)](const CVec& x) { return reg_max(p, u1(x), u2(x)); };
}

struct MarginResult {
  double margin = std::numeric_limits<double>::infinity();
  double error_estimate = 0.0;
  CVec argmin;
  RVec argmin_real;
};

/// Minimum over `nodes` of the smallest eigenvalue of the finite-difference
/// complex Hessian.
inline MarginResult strict_psh_margin(const PointField& field, const std::vector<CVec>& nodes, const FdScheme& fd) {
  MarginResult r;
  for (const CVec& t : nodes) {
    const FdHessianResult h = complex_hessian_fd(field, t, fd);
    const double v = min_eigenvalue(h.hessian.full);
    if (v < r.margin) {
      r.margin = v;
      r.argmin = t;
    }
    r.error_estimate = std::max(r.error_estimate, h.error_estimate);
  }
  return r;
}

inline MarginResult strict_psh_margin(const PointField& field, const ParamGrid& grid, const FdScheme& fd) {
  return strict_psh_margin(field, grid.nodes(), fd);
}

/// Minimum over `nodes` of the smallest eigenvalue of the real
/// finite-difference Hessian.
inline MarginResult strict_convex_margin(const RealField& field, const std::vector<RVec>& nodes, const FdScheme& fd) {
  MarginResult r;
  for (const RVec& x : nodes) {
    const FdRealHessianResult h = real_hessian_fd(field, x, fd);
    const double v = symmetric_eigenvalues(h.hessian)(0);
    if (v < r.margin) {
      r.margin = v;
      r.argmin_real = x;
    }
    r.error_estimate = std::max(r.error_estimate, h.error_estimate);
  }
  return r;
}

inline MarginResult strict_convex_margin(const RealField& field, const RealGrid& grid, const FdScheme& fd) {
  return strict_convex_margin(field, grid.nodes(), fd);
}

}  // namespace pshlab
