#pragma once

// Weighted Bergman kernels of circular fibers through the degree
// decomposition K = Σ Kᵏ, each Kᵏ obtained by orthonormalizing the degree-k
// monomials against the fiber Gram matrix.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pshlab/metric.hpp"
#include "pshlab/psh_toolkit.hpp"

namespace pshlab {

/// Degree-k kernel at z: ‖L⁻¹ e(z)‖² with H = L L* and e the monomial values.
inline double degree_kernel(const DomainFamily& family, const WeightField& weight, const ParamPoint& t, int k,
                            const FiberPoint& z, const QuadratureSpec& spec = {}) {
  const MonomialBasis basis(family.m, k);
  const GramResult g = gram_matrix(family, weight, t, basis, spec);
  Eigen::LLT<CMat> llt(g.H);
  if (llt.info() != Eigen::Success)
    throw InvalidMetricError("degree_kernel: Gram matrix of degree " + std::to_string(k) +
                             " not positive definite at t=" + format_point(t.t));
  const CVec y = llt.matrixL().solve(basis.evaluate(z.z));
  return y.squaredNorm();
}

struct BergmanValue {
  double value = 0.0;
  double tail = 0.0;  // geometric tail estimate of the dropped degrees
  bool truncation_warning = false;
  std::vector<double> terms;
};

/// Partial sum Σ_{k ≤ k_max} Kᵏ(t, z) with a ratio-test tail estimate.
inline BergmanValue bergman_kernel(const DomainFamily& family, const WeightField& weight, const ParamPoint& t,
                                   const FiberPoint& z, int k_max, const QuadratureSpec& spec = {}) {
  if (k_max < 0) throw DomainError("bergman_kernel: k_max must be ≥ 0");
  if (!family.fiber_contains(t.t, z.z)) throw DomainError("bergman_kernel: z is not inside the fiber");
  BergmanValue out;
  for (int k = 0; k <= k_max; ++k) {
    out.terms.push_back(degree_kernel(family, weight, t, k, z, spec));
    out.value += out.terms.back();
  }
  if (k_max >= 1) {
    const double last = out.terms[k_max], prev = out.terms[k_max - 1];
    if (last == 0.0) {
      out.tail = 0.0;
    } else if (prev > 0.0 && last < prev) {
      const double q = last / prev;
      out.tail = last * q / (1.0 - q);
    } else {
      out.tail = std::numeric_limits<double>::infinity();
      out.truncation_warning = true;
    }
  }
  return out;
}

/// Holomorphic graph t ↦ ξ(t) in the fibers.
using HolomorphicMap = std::function<CVec(const CVec& t)>;

/// ξ(t) = z0 + A t.
inline HolomorphicMap affine_graph(CVec z0, CMat a) {
  return [z0 = std::move(z0), a = std::move(a)](const CVec& t) -> CVec { return z0 + a * t; };
}

struct GraphMargin {
  MarginResult margin;
  bool truncation_warning = false;
};

/// Minimum over the grid of the smallest eigenvalue of the complex Hessian of
/// t ↦ ln K(t, ξ(t)) at truncation k_max.
inline GraphMargin logK_graph_margin(const DomainFamily& family, const WeightField& weight,
                                     const HolomorphicMap& graph, const ParamGrid& grid, int k_max,
                                     const FdScheme& fd, const QuadratureSpec& spec = {}) {
  GraphMargin out;
  PointField logk = [&](const CVec& t) {
    const BergmanValue b = bergman_kernel(family, weight, ParamPoint(t), FiberPoint(graph(t)), k_max, spec);
    out.truncation_warning = out.truncation_warning || b.truncation_warning;
    return std::log(b.value);
  };
  out.margin = strict_psh_margin(logk, grid, fd);
  return out;
}

}  // namespace pshlab
