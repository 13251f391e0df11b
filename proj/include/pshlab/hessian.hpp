#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "pshlab/linalg.hpp"

namespace pshlab {

/// Finite-difference settings. With `richardson` the step-h and step-2h
/// central differences are combined into a fourth-order estimate.
struct FdScheme {
  double step = 1e-2;
  bool richardson = true;
};

/// Complex Hessian of a scalar field on ℂⁿ⁺ᵐ, split into the parameter block
/// (first n coordinates) and the fiber block.
struct ComplexHessian {
  CMat full;
  Eigen::Index n = 0;

  ComplexHessian() = default;
  ComplexHessian(CMat m, Eigen::Index n_param) : full(std::move(m)), n(n_param) {}

  Eigen::Index m() const { return full.rows() - n; }
  CMat A() const { return full.topLeftCorner(n, n); }
  CMat B() const { return full.topRightCorner(n, m()); }
  CMat C() const { return full.bottomLeftCorner(m(), n); }
  CMat F() const { return full.bottomRightCorner(m(), m()); }

  static ComplexHessian from_blocks(const CMat& a, const CMat& b, const CMat& f) {
    const Eigen::Index n = a.rows(), m = f.rows();
    CMat full(n + m, n + m);
    full << a, b, b.adjoint(), f;
    return ComplexHessian(std::move(full), n);
  }
};

struct FdHessianResult {
  ComplexHessian hessian;
  double error_estimate = 0.0;
};

struct FdRealHessianResult {
  RMat hessian;
  double error_estimate = 0.0;
};

namespace detail {

// Central second differences of f in the real coordinates of x.
template <class F>
RMat real_second_differences(const F& f, const RVec& x, double h, double f0) {
  const Eigen::Index d = x.size();
  RMat r(d, d);
  RVec y = x;
  for (Eigen::Index p = 0; p < d; ++p) {
    y(p) = x(p) + h;
    const double fp = f(y);
    y(p) = x(p) - h;
    const double fm = f(y);
    y(p) = x(p);
    r(p, p) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = p + 1; q < d; ++q) {
      double acc = 0.0;
      for (int sp : {1, -1}) {
        for (int sq : {1, -1}) {
          y(p) = x(p) + sp * h;
          y(q) = x(q) + sq * h;
          acc += sp * sq * f(y);
        }
      }
      y(p) = x(p);
      y(q) = x(q);
      r(p, q) = r(q, p) = acc / (4.0 * h * h);
    }
  }
  return r;
}

// Combines the real Hessian in (Re x_j, Im x_j) coordinates into
// ∂²/∂x_j∂x̄_l = ¼[(∂x∂x + ∂y∂y) + i(∂x_j∂y_l − ∂y_j∂x_l)].
inline CMat wirtinger_from_real(const RMat& r, Eigen::Index n) {
  CMat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double re = r(j, l) + r(n + j, n + l);
      const double im = r(j, n + l) - r(n + j, l);
      out(j, l) = 0.25 * cplx(re, im);
    }
  }
  return out;
}

inline void check_step(double step, const char* op) {
  if (!(step > 0.0) || step < 1e-7 || !std::isfinite(step))
    throw NumericError(std::string(op) + ": finite-difference step underflow or invalid (" +
                       std::to_string(step) + ")");
}

}  // namespace detail

/// Complex Hessian ∂²f/∂x_j∂x̄_l of a real field at `point` by central
/// differences in the underlying real coordinates. `n_param` only labels the
/// block split of the result.
inline FdHessianResult complex_hessian_fd(const PointField& field, const CVec& point,
                                          const FdScheme& scheme, Eigen::Index n_param = -1) {
  detail::check_step(scheme.step, "complex_hessian_fd");
  const Eigen::Index n = point.size();
  RVec x(2 * n);
  x << point.real(), point.imag();
  double max_abs = 0.0;
  auto f = [&](const RVec& y) {
    CVec c(n);
    for (Eigen::Index j = 0; j < n; ++j) c(j) = cplx(y(j), y(n + j));
    const double v = field(c);
    if (!std::isfinite(v))
      throw NumericError("complex_hessian_fd: non-finite field value at " + format_point(c));
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  };
  const double f0 = f(x);
  const double h = scheme.step;
  CMat lh = detail::wirtinger_from_real(detail::real_second_differences(f, x, h, f0), n);
  CMat l2h = detail::wirtinger_from_real(detail::real_second_differences(f, x, 2.0 * h, f0), n);
  const double trunc = (lh - l2h).cwiseAbs().maxCoeff() / 3.0;
  const double roundoff = 16.0 * std::numeric_limits<double>::epsilon() * std::max(max_abs, 1.0) / (h * h);
  CMat value = scheme.richardson ? CMat((4.0 * lh - l2h) / 3.0) : lh;
  value = hermitian_part(value);
  return {ComplexHessian(std::move(value), n_param < 0 ? n : n_param), trunc + roundoff};
}

/// Convenience overload for a field on U × ℂᵐ evaluated jointly in (t, z).
inline FdHessianResult complex_hessian_fd(const ScalarField& field, const CVec& t, const CVec& z,
                                          const FdScheme& scheme) {
  const Eigen::Index n = t.size();
  PointField joint = [&](const CVec& x) { return field(x.head(n), x.tail(x.size() - n)); };
  return complex_hessian_fd(joint, join(t, z), scheme, n);
}

/// Real Hessian of a field on ℝᵈ by central differences.
inline FdRealHessianResult real_hessian_fd(const RealField& field, const RVec& point,
                                           const FdScheme& scheme) {
  detail::check_step(scheme.step, "real_hessian_fd");
  double max_abs = 0.0;
  auto f = [&](const RVec& y) {
    const double v = field(y);
    if (!std::isfinite(v)) throw NumericError("real_hessian_fd: non-finite field value");
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  };
  const double f0 = f(point);
  const double h = scheme.step;
  RMat rh = detail::real_second_differences(f, point, h, f0);
  RMat r2h = detail::real_second_differences(f, point, 2.0 * h, f0);
  const double trunc = (rh - r2h).cwiseAbs().maxCoeff() / 3.0;
  const double roundoff = 16.0 * std::numeric_limits<double>::epsilon() * std::max(max_abs, 1.0) / (h * h);
  RMat value = scheme.richardson ? RMat((4.0 * rh - r2h) / 3.0) : rh;
  return {0.5 * (value + value.transpose()), trunc + roundoff};
}

}  // namespace pshlab
