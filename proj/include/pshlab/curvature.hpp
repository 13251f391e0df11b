#pragma once

// Chern curvature of fiberwise Gram fields and the Nakano form.
//
// Sign convention: for a line bundle with H = e^{−ψ} the curvature
// coefficient is Θ₁₁ = ∂²ψ/∂t∂t̄, so positive means Nakano positive.
// Coefficient vectors u of sections act on the metric through Ĝ = Hᵀ
// (h(u, v) = v* Ĝ u), and Θ_{jl} = −∂_{t̄_l}(Ĝ⁻¹ ∂_{t_j} Ĝ).

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pshlab/metric.hpp"

namespace pshlab {

inline constexpr const char* kCurvatureConvention =
    "Theta_jl = -d/dtbar_l (G^-1 d/dt_j G), G = H^T; H = exp(-psi) gives Theta = psi_{t tbar} > 0";

struct CurvatureBlocks {
  CVec t;
  CMat metric;  // Ĝ at the base point
  std::vector<std::vector<CMat>> theta;        // Richardson-extrapolated when enabled
  std::vector<std::vector<CMat>> theta_plain;  // single-step central differences
  double roundoff_floor = 0.0;
  double condition = 1.0;
  bool conditioning_warning = false;
  std::string convention = kCurvatureConvention;

  int n() const { return static_cast<int>(theta.size()); }
  int rank() const { return static_cast<int>(metric.rows()); }
};

namespace detail {

struct MatrixDerivatives {
  std::vector<CMat> d;                  // ∂_{t_j} Ĝ
  std::vector<CMat> dbar;               // ∂_{t̄_j} Ĝ
  std::vector<std::vector<CMat>> ddbar; // ∂_{t_j}∂_{t̄_l} Ĝ
};

inline MatrixDerivatives matrix_derivatives(const GramNode& node, double h, int s) {
  const int n = static_cast<int>(node.t.size());
  const int dim = 2 * n;
  auto G = [&](std::vector<int> off) -> CMat { return node.at(off).transpose(); };
  const std::vector<int> zero(static_cast<std::size_t>(dim), 0);
  const CMat g0 = G(zero);
  const double hs = h * s;
  std::vector<CMat> first(dim);
  std::vector<std::vector<CMat>> second(dim, std::vector<CMat>(dim));
  for (int p = 0; p < dim; ++p) {
    auto plus = zero, minus = zero;
    plus[p] = s;
    minus[p] = -s;
    const CMat gp = G(plus), gm = G(minus);
    first[p] = (gp - gm) / (2.0 * hs);
    second[p][p] = (gp - 2.0 * g0 + gm) / (hs * hs);
  }
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      CMat acc = CMat::Zero(g0.rows(), g0.cols());
      for (int sp : {1, -1}) {
        for (int sq : {1, -1}) {
          auto o = zero;
          o[p] = sp * s;
          o[q] = sq * s;
          acc += static_cast<double>(sp * sq) * G(o);
        }
      }
      second[p][q] = second[q][p] = acc / (4.0 * hs * hs);
    }
  }
  const cplx I(0.0, 1.0);
  MatrixDerivatives md;
  md.d.resize(n);
  md.dbar.resize(n);
  md.ddbar.assign(n, std::vector<CMat>(n));
  for (int j = 0; j < n; ++j) {
    md.d[j] = 0.5 * (first[j] - I * first[n + j]);
    md.dbar[j] = 0.5 * (first[j] + I * first[n + j]);
    for (int l = 0; l < n; ++l)
      md.ddbar[j][l] = 0.25 * ((second[j][l] + second[n + j][n + l]) + I * (second[j][n + l] - second[n + j][l]));
  }
  return md;
}

inline std::vector<std::vector<CMat>> curvature_from(const CMat& g0, const MatrixDerivatives& md) {
  const int n = static_cast<int>(md.d.size());
  Eigen::PartialPivLU<CMat> lu(g0);
  std::vector<std::vector<CMat>> theta(n, std::vector<CMat>(n));
  for (int j = 0; j < n; ++j) {
    const CMat gi_dj = lu.solve(md.d[j]);
    for (int l = 0; l < n; ++l) theta[j][l] = lu.solve(md.dbar[l]) * gi_dj - lu.solve(md.ddbar[j][l]);
  }
  return theta;
}

}  // namespace detail

/// Curvature blocks Θ_{jl} at grid node `node_index` of a Gram field.
inline CurvatureBlocks chern_curvature(const GramField& field, std::size_t node_index) {
  if (node_index >= field.nodes.size()) throw DomainError("chern_curvature: node index outside the grid");
  const GramNode& node = field.nodes[node_index];
  CurvatureBlocks cb;
  cb.t = node.t;
  cb.metric = node.center().transpose();
  cb.condition = hpd_condition(cb.metric);
  cb.conditioning_warning = cb.condition > 1e12;
  const auto md1 = detail::matrix_derivatives(node, field.step, 1);
  cb.theta_plain = detail::curvature_from(cb.metric, md1);
  if (field.richardson) {
    const auto md2 = detail::matrix_derivatives(node, field.step, 2);
    detail::MatrixDerivatives ext = md1;
    const int n = static_cast<int>(md1.d.size());
    for (int j = 0; j < n; ++j) {
      ext.d[j] = (4.0 * md1.d[j] - md2.d[j]) / 3.0;
      ext.dbar[j] = (4.0 * md1.dbar[j] - md2.dbar[j]) / 3.0;
      for (int l = 0; l < n; ++l) ext.ddbar[j][l] = (4.0 * md1.ddbar[j][l] - md2.ddbar[j][l]) / 3.0;
    }
    cb.theta = detail::curvature_from(cb.metric, ext);
  } else {
    cb.theta = cb.theta_plain;
  }
  const double h = field.step;
  cb.roundoff_floor = 8.0 * (node.quad_error + std::numeric_limits<double>::epsilon()) * cb.condition / (h * h);
  return cb;
}

struct NakanoForm {
  CMat M;                 // Hermitian (n·r)×(n·r) form, block (l, j) = Ĝ Θ_{jl}
  CMat metric;            // I_n ⊗ Ĝ
  RVec spectrum;          // eigenvalues of M relative to the metric, ascending
  double min_eigenvalue = 0.0;
  double hermitian_residual = 0.0;
};

namespace detail {

inline NakanoForm assemble_nakano(const std::vector<std::vector<CMat>>& theta, const CMat& g) {
  const int n = static_cast<int>(theta.size());
  const int r = static_cast<int>(g.rows());
  NakanoForm nf;
  nf.M = CMat::Zero(n * r, n * r);
  nf.metric = CMat::Zero(n * r, n * r);
  for (int j = 0; j < n; ++j) {
    nf.metric.block(j * r, j * r, r, r) = g;
    for (int l = 0; l < n; ++l) nf.M.block(l * r, j * r, r, r) = g * theta[j][l];
  }
  nf.hermitian_residual = hermitian_residual(nf.M);
  if (nf.M.norm() > 0.0 && nf.hermitian_residual > 1e-6)
    throw NumericError("nakano_form: Hermitian symmetrization residual " + std::to_string(nf.hermitian_residual));
  nf.M = hermitian_part(nf.M);
  nf.spectrum = relative_eigenvalues(nf.M, nf.metric);
  nf.min_eigenvalue = nf.spectrum.size() ? nf.spectrum(0) : 0.0;
  return nf;
}

}  // namespace detail

/// Nakano form Σ h(Θ_{jl}u_j, u_l) with spectrum taken relative to h, so it
/// does not depend on the frame. `H` is the Gram matrix at the base point.
inline NakanoForm nakano_form(const CurvatureBlocks& blocks, const CMat& H) {
  return detail::assemble_nakano(blocks.theta, H.transpose());
}

/// Nakano form from explicit blocks (n = blocks.size()).
inline NakanoForm nakano_form(const std::vector<std::vector<CMat>>& theta, const CMat& H) {
  return detail::assemble_nakano(theta, H.transpose());
}

struct NodeCurvature {
  CVec t;
  RVec spectrum;
  double min_eigenvalue = 0.0;
  double error_estimate = 0.0;
  double condition = 1.0;
};

struct CurvatureReport {
  std::vector<NodeCurvature> nodes;
  double margin = 0.0;           // min eigenvalue over nodes
  double error_estimate = 0.0;   // max differencing + roundoff estimate
  double eps_strict = 0.0;
  bool pass = false;
  bool conditioning_warning = false;
  bool accuracy_warning = false;
  int rank = 0;
  std::string convention = kCurvatureConvention;
  double seconds = 0.0;
};

/// Nakano spectrum with its error estimate at one node of a Gram field.
inline NodeCurvature node_curvature(const GramField& field, std::size_t i) {
  const CurvatureBlocks cb = chern_curvature(field, i);
  const CMat& H = field.nodes[i].center();
  const NakanoForm nf = nakano_form(cb, H);
  const NakanoForm plain = nakano_form(cb.theta_plain, H);
  NodeCurvature nc;
  nc.t = cb.t;
  nc.spectrum = nf.spectrum;
  nc.min_eigenvalue = nf.min_eigenvalue;
  nc.error_estimate = (nf.spectrum - plain.spectrum).cwiseAbs().maxCoeff() + cb.roundoff_floor;
  nc.condition = cb.condition;
  return nc;
}

/// Curvature report over an existing Gram field.
inline CurvatureReport certify_field(const GramField& field, std::optional<double> eps_strict = std::nullopt) {
  CurvatureReport rep;
  rep.rank = field.basis.size();
  rep.margin = std::numeric_limits<double>::infinity();
  rep.accuracy_warning = field.accuracy_warning;
  for (std::size_t i = 0; i < field.nodes.size(); ++i) {
    NodeCurvature nc = node_curvature(field, i);
    rep.margin = std::min(rep.margin, nc.min_eigenvalue);
    rep.error_estimate = std::max(rep.error_estimate, nc.error_estimate);
    rep.conditioning_warning = rep.conditioning_warning || nc.condition > 1e12;
    rep.nodes.push_back(std::move(nc));
  }
  rep.eps_strict = eps_strict.value_or(10.0 * rep.error_estimate);
  rep.pass = rep.margin > rep.eps_strict;
  return rep;
}

/// Builds the Gram field of Eᵏ over the grid and reports the minimum Nakano
/// eigenvalue; strict positivity passes iff the margin exceeds ε_strict
/// (default ten times the differencing error estimate).
inline CurvatureReport certify_nakano(const DomainFamily& family, const WeightField& weight, int k,
                                      const ParamGrid& grid, const QuadratureSpec& spec, const FdScheme& fd,
                                      std::optional<double> eps_strict = std::nullopt) {
  const auto start = std::chrono::steady_clock::now();
  const GramField field = gram_field(family, weight, k, grid, spec, fd);
  CurvatureReport rep = certify_field(field, eps_strict);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Berndtsson's lower bound

/// H(φ) = A − B F⁻¹ C of a blocked complex Hessian.
inline CMat schur_complement(const ComplexHessian& h) {
  const CMat F = h.F();
  if (F.size() == 0) return h.A();
  const RVec ev = hermitian_eigenvalues(F);
  const double big = ev.cwiseAbs().maxCoeff();
  const double small = ev.cwiseAbs().minCoeff();
  if (!(small > 0.0) || big / small > 1e12)
    throw NumericError("schur_complement: fiber block F is singular (condition > 1e12)");
  return hermitian_part(h.A() - h.B() * F.partialPivLu().solve(h.C()));
}

/// Schur complement of the Hessian of φ + ε(|t|² + |z|²).
inline CMat schur_complement_regularized(const ComplexHessian& h, double eps) {
  ComplexHessian reg = h;
  reg.full += eps * CMat::Identity(h.full.rows(), h.full.cols());
  return schur_complement(reg);
}

inline ComplexHessian weight_hessian(const WeightField& weight, const CVec& t, const CVec& z,
                                     const FdScheme& fd = {1e-3, true}) {
  if (weight.hessian) return weight.hessian(t, z);
  ScalarField f = [&](const CVec& tt, const CVec& zz) { return weight(tt, zz); };
  return complex_hessian_fd(f, t, z, fd).hessian;
}

/// Σ_{jl} ∫_D H(φ)_{jl} u_j ū_l e^{−φ} dλ_z for sections given as coefficient
/// vectors in `basis`. A singular fiber block switches to the ε-regularized
/// complement when `regularization` is set and is an error otherwise.
inline QuadResult berndtsson_lower_bound(const DomainFamily& family, const WeightField& weight, const ParamPoint& t,
                                         const std::vector<CVec>& sections, const MonomialBasis& basis,
                                         const QuadratureSpec& spec = {},
                                         std::optional<double> regularization = 1e-6) {
  if (family.kind != FamilyKind::product && family.kind != FamilyKind::custom)
    throw DomainError("berndtsson_lower_bound: family must be a product U × D");
  if (static_cast<int>(sections.size()) != family.n)
    throw DomainError("berndtsson_lower_bound: need one section per parameter direction");
  bool all_zero = true;
  for (const CVec& u : sections) all_zero = all_zero && u.isZero(0.0);
  if (all_zero) return QuadResult{};
  const int n = family.n;
  QuadResult q = integrate_over_fiber(
      family, t.t,
      [&](const CVec& z) {
        const ComplexHessian hz = weight_hessian(weight, t.t, z);
        CMat H;
        try {
          H = schur_complement(hz);
        } catch (const NumericError&) {
          if (!regularization) throw;
          H = schur_complement_regularized(hz, *regularization);
        }
        const CVec e = basis.evaluate(z);
        CVec uz(n);
        for (int j = 0; j < n; ++j) uz(j) = sections[static_cast<std::size_t>(j)].cwiseProduct(e).sum();
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) acc += H(j, l) * uz(j) * std::conj(uz(l));
        return acc * std::exp(-weight(t.t, z));
      },
      spec);
  q.value = q.value.real();
  return q;
}

struct InequalityReport {
  std::vector<double> lhs;
  std::vector<double> rhs;
  double min_gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Σ(Θ_{jl}u_j, u_l) (from the Chern curvature) against Berndtsson's
/// right-hand side for `tuples` random section tuples plus the basis tuples.
inline InequalityReport verify_curvature_inequality(const DomainFamily& family, const WeightField& weight, int k,
                                                    const ParamPoint& t, const QuadratureSpec& spec,
                                                    const FdScheme& fd, int tuples = 4, std::uint64_t seed = 23,
                                                    const std::vector<std::vector<CVec>>& extra = {}) {
  const MonomialBasis basis(family.m, k);
  ParamGrid single;
  single.box.re.clear();
  single.box.im.clear();
  for (int j = 0; j < family.n; ++j) {
    single.box.re.push_back({t.t(j).real(), t.t(j).real()});
    single.box.im.push_back({t.t(j).imag(), t.t(j).imag()});
  }
  single.resolution = 1;
  const GramField field = gram_field(family, weight, basis, single, spec, fd);
  const NodeCurvature nc = node_curvature(field, 0);
  const CurvatureBlocks cb = chern_curvature(field, 0);
  const CMat& g = cb.metric;
  const int n = family.n, r = basis.size();

  std::vector<std::vector<CVec>> all = extra;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < tuples; ++s) {
    std::vector<CVec> u(n, CVec(r));
    for (auto& v : u)
      for (int a = 0; a < r; ++a) v(a) = cplx(gauss(rng), gauss(rng));
    all.push_back(u);
  }
  InequalityReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& u : all) {
    cplx lhs = 0.0;
    double norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
      norm2 += (u[j].adjoint() * g * u[j])(0).real();
      for (int l = 0; l < n; ++l) lhs += (u[l].adjoint() * g * cb.theta[j][l] * u[j])(0);
    }
    const QuadResult rhs = berndtsson_lower_bound(family, weight, t, u, basis, spec);
    rep.lhs.push_back(lhs.real());
    rep.rhs.push_back(rhs.value.real());
    rep.min_gap = std::min(rep.min_gap, lhs.real() - rhs.value.real());
    rep.tolerance = std::max(rep.tolerance, nc.error_estimate * norm2 + rhs.error);
  }
  if (all.empty()) rep.min_gap = 0.0;
  rep.pass = rep.min_gap >= -rep.tolerance;
  return rep;
}

}  // namespace pshlab
