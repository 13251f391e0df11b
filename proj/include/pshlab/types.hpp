#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pshlab {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an evaluation point or configuration lies outside the region
/// where an operation is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, singular blocks or failed factorizations.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Gram matrix that is not Hermitian positive definite.
class InvalidMetricError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Config validation failure; `field` is the dotted key that failed.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parameter coordinates t in U ⊂ ℂⁿ.
struct ParamPoint {
  CVec t;
  ParamPoint() = default;
  explicit ParamPoint(CVec v) : t(std::move(v)) {}
  ParamPoint(std::initializer_list<cplx> v) : t(CVec::Zero(static_cast<Eigen::Index>(v.size()))) {
    Eigen::Index i = 0;
    for (auto c : v) t(i++) = c;
  }
  Eigen::Index dim() const { return t.size(); }
};

/// Fiber coordinates z in ℂᵐ.
struct FiberPoint {
  CVec z;
  FiberPoint() = default;
  explicit FiberPoint(CVec v) : z(std::move(v)) {}
  FiberPoint(std::initializer_list<cplx> v) : z(CVec::Zero(static_cast<Eigen::Index>(v.size()))) {
    Eigen::Index i = 0;
    for (auto c : v) z(i++) = c;
  }
  Eigen::Index dim() const { return z.size(); }
};

/// Real-valued field on U × ℂᵐ.
using ScalarField = std::function<double(const CVec& t, const CVec& z)>;
/// Real-valued field of a single complex vector (used for Hessian checks).
using PointField = std::function<double(const CVec& x)>;
/// Real-valued field of a real vector.
using RealField = std::function<double(const RVec& x)>;

inline std::string format_point(const CVec& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v(i).real());
    s += (v(i).imag() < 0 ? "-" : "+");
    s += std::to_string(std::abs(v(i).imag())) + "i";
  }
  return s + ")";
}

inline bool all_finite(const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

/// Joins parameter and fiber coordinates into one vector of ℂⁿ⁺ᵐ.
inline CVec join(const CVec& t, const CVec& z) {
  CVec x(t.size() + z.size());
  x << t, z;
  return x;
}

}  // namespace pshlab
