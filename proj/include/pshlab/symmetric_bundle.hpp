#pragma once

// Homogeneous polynomial spaces, S¹ character projections and the action of
// a linear frame change on degree-k monomial Gram matrices.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "pshlab/metric.hpp"

namespace pshlab {

/// dim Sᵏ(ℂᵐ) = C(m+k−1, k).
inline long long dim_homogeneous(int m, int k) {
  if (m < 1 || k < 0) throw DomainError("dim_homogeneous: need m ≥ 1 and k ≥ 0");
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (m - 1 + i) / i;
  return r;
}

using HoloFunction = std::function<cplx(const CVec& z)>;

inline int default_circle_nodes(int k_max) { return 4 * k_max + 1; }

/// f_k(z) = (1/2π) ∫ f(e^{iθ} z) e^{−ikθ} dθ on `nodes` uniform nodes.
inline cplx character_project(const HoloFunction& f, const CVec& z, int k, int nodes) {
  if (k < 0) throw DomainError("character_project: k must be ≥ 0");
  if (nodes <= 2 * k) throw NumericError("character_project: aliasing, " + std::to_string(nodes) +
                                         " nodes cannot resolve degree " + std::to_string(k));
  cplx s = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double th = 2.0 * kPi * j / nodes;
    s += f(std::polar(1.0, th) * z) * std::polar(1.0, -k * th);
  }
  return s / static_cast<double>(nodes);
}

inline cplx character_project(const HoloFunction& f, const CVec& z, int k) {
  return character_project(f, z, k, default_circle_nodes(k));
}

/// Degree-k Taylor component expressed in the graded-lex monomial basis.
struct CharacterComponent {
  int k = 0;
  int m = 1;
  MonomialBasis basis;
  CVec coefficients;

  cplx operator()(const CVec& z) const { return basis.evaluate(z).cwiseProduct(coefficients).sum(); }
  HoloFunction as_function() const {
    return [c = *this](const CVec& z) { return c(z); };
  }
};

/// Coefficients of the degree-k component of f, by discrete Fourier analysis
/// on the torus of polyradius `radius` with `nodes` points per circle.
inline CharacterComponent character_component(const HoloFunction& f, int m, int k, int nodes, double radius = 1.0) {
  if (nodes <= 2 * k) throw NumericError("character_component: aliasing, too few nodes for degree " + std::to_string(k));
  CharacterComponent out;
  out.k = k;
  out.m = m;
  out.basis = MonomialBasis(m, k);
  out.coefficients = CVec::Zero(out.basis.size());
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= nodes;
  CVec z(m);
  for (long long c = 0; c < total; ++c) {
    long long rem = c;
    for (int i = 0; i < m; ++i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % nodes);
      rem /= nodes;
      z(i) = std::polar(radius, 2.0 * kPi * idx[static_cast<std::size_t>(i)] / nodes);
    }
    const cplx fz = f(z);
    for (int a = 0; a < out.basis.size(); ++a) {
      const auto& alpha = out.basis.indices[static_cast<std::size_t>(a)].alpha;
      double phase = 0.0;
      for (int i = 0; i < m; ++i)
        phase -= 2.0 * kPi * alpha[static_cast<std::size_t>(i)] * idx[static_cast<std::size_t>(i)] / nodes;
      out.coefficients(a) += fz * std::polar(1.0, phase);
    }
  }
  out.coefficients /= static_cast<double>(total) * std::pow(radius, k);
  return out;
}

inline CharacterComponent character_component(const HoloFunction& f, int m, int k) {
  return character_component(f, m, k, default_circle_nodes(k));
}

namespace detail {

using Poly = std::map<std::vector<int>, cplx>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

}  // namespace detail

/// Matrix S of the frame change w = G z on degree-k monomials tensored with
/// the volume factor: det(G)·w^α = Σ_β S_{βα} z^β.
inline CMat induced_frame_matrix(const CMat& g, int k) {
  const int m = static_cast<int>(g.rows());
  if (g.cols() != m) throw DomainError("induced_frame_matrix: G must be square");
  const cplx det = g.determinant();
  const double scale = std::max(g.norm(), 1e-300);
  if (std::abs(det) <= 1e-13 * std::pow(scale, m)) throw DomainError("frame change G is singular");
  const MonomialBasis basis(m, k);
  std::map<std::vector<int>, int> position;
  for (int a = 0; a < basis.size(); ++a) position[basis.indices[static_cast<std::size_t>(a)].alpha] = a;
  std::vector<detail::Poly> linear(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<int> e(static_cast<std::size_t>(m), 0);
      e[static_cast<std::size_t>(j)] = 1;
      if (g(i, j) != cplx(0.0)) linear[static_cast<std::size_t>(i)][e] += g(i, j);
    }
  CMat s = CMat::Zero(basis.size(), basis.size());
  for (int a = 0; a < basis.size(); ++a) {
    detail::Poly p{{std::vector<int>(static_cast<std::size_t>(m), 0), det}};
    const auto& alpha = basis.indices[static_cast<std::size_t>(a)].alpha;
    for (int i = 0; i < m; ++i)
      for (int r = 0; r < alpha[static_cast<std::size_t>(i)]; ++r) p = detail::poly_mul(p, linear[static_cast<std::size_t>(i)]);
    for (const auto& [e, c] : p) s(position.at(e), a) += c;
  }
  return s;
}

/// Gram matrix of the transformed frame: H' = Sᵀ H S̄.
inline CMat frame_change_covariance(const CMat& h, const CMat& g, int k) {
  const CMat s = induced_frame_matrix(g, k);
  if (s.rows() != h.rows()) throw DomainError("frame_change_covariance: H does not match the degree-k basis");
  return s.transpose() * h * s.conjugate();
}

}  // namespace pshlab
