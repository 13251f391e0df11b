#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pshlab/types.hpp"

namespace pshlab {

/// Relative Hermitian residual ‖M − M*‖ / max(‖M‖, tiny).
inline double hermitian_residual(const CMat& m) {
  const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
  return (m - m.adjoint()).norm() / scale;
}

inline CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

/// Ascending eigenvalues of the Hermitian part of `m`.
inline RVec hermitian_eigenvalues(const CMat& m) {
  if (m.size() == 0) return RVec();
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("hermitian eigensolver did not converge");
  return es.eigenvalues();
}

inline double min_eigenvalue(const CMat& m) { return hermitian_eigenvalues(m)(0); }

inline RVec symmetric_eigenvalues(const RMat& m) {
  if (m.size() == 0) return RVec();
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

/// 2-norm condition number of a Hermitian positive definite matrix.
inline double hpd_condition(const CMat& m) {
  RVec ev = hermitian_eigenvalues(m);
  if (ev(0) <= 0.0) return std::numeric_limits<double>::infinity();
  return ev(ev.size() - 1) / ev(0);
}

/// Eigenvalues of the Hermitian form `form` relative to the inner product
/// `metric`, i.e. the generalized problem form·v = λ·metric·v.
inline RVec relative_eigenvalues(const CMat& form, const CMat& metric) {
  Eigen::LLT<CMat> llt(hermitian_part(metric));
  if (llt.info() != Eigen::Success) throw InvalidMetricError("metric is not positive definite");
  const CMat& l = llt.matrixL();
  CMat tmp = l.triangularView<Eigen::Lower>().solve(hermitian_part(form));
  CMat reduced = l.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint();
  return hermitian_eigenvalues(reduced);
}

}  // namespace pshlab
