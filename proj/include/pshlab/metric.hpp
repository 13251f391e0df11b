#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pshlab/quadrature.hpp"

namespace pshlab {

/// All multi-indices of total degree k in m variables, graded-lexicographic
/// (z₁ᵏ first).
struct MonomialBasis {
  int m = 1;
  int k = 0;
  std::vector<MultiIndex> indices;

  MonomialBasis() = default;
  MonomialBasis(int m_, int k_) : m(m_), k(k_) {
    if (m < 1) throw DomainError("MonomialBasis: m must be ≥ 1");
    if (k < 0) throw DomainError("MonomialBasis: k must be ≥ 0");
    std::vector<int> cur(static_cast<std::size_t>(m), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == m - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        indices.emplace_back(cur);
        return;
      }
      for (int a = remaining; a >= 0; --a) {
        cur[static_cast<std::size_t>(pos)] = a;
        self(self, pos + 1, remaining - a);
      }
    };
    rec(rec, 0, k);
  }

  /// Basis given by an explicit list (used for single characters, possibly
  /// with negative exponents).
  static MonomialBasis explicit_list(std::vector<MultiIndex> idx) {
    MonomialBasis b;
    b.m = idx.empty() ? 1 : idx.front().size();
    b.k = idx.empty() ? 0 : idx.front().degree();
    b.indices = std::move(idx);
    return b;
  }

  int size() const { return static_cast<int>(indices.size()); }

  /// Values of the basis monomials at z.
  CVec evaluate(const CVec& z) const {
    CVec v(size());
    for (int a = 0; a < size(); ++a) v(a) = monomial(indices[static_cast<std::size_t>(a)], z);
    return v;
  }
};

struct GramResult {
  CMat H;
  double error = 0.0;       // max absolute quadrature error over entries
  bool accuracy_warning = false;
};

/// H_ab = ∫_{Ω_t} z^{α_a} z̄^{α_b} e^{−φ_t} dλ for a fixed basis. The lower
/// triangle is filled by conjugation and the diagonal is real.
inline GramResult gram_matrix(const DomainFamily& family, const WeightField& weight, const ParamPoint& t,
                              const MonomialBasis& basis, const QuadratureSpec& spec = {}) {
  const int r = basis.size();
  GramResult g;
  g.H = CMat::Zero(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = a; b < r; ++b) {
      const QuadResult q = weighted_monomial_integral(family, weight, t, basis.indices[static_cast<std::size_t>(a)],
                                                      basis.indices[static_cast<std::size_t>(b)], spec);
      g.error = std::max(g.error, q.error);
      g.accuracy_warning = g.accuracy_warning || q.accuracy_warning;
      if (a == b) {
        g.H(a, a) = q.value.real();
      } else {
        g.H(a, b) = q.value;
        g.H(b, a) = std::conj(q.value);
      }
    }
  }
  return g;
}

inline GramResult gram_matrix(const DomainFamily& family, const WeightField& weight, const ParamPoint& t, int k,
                              const QuadratureSpec& spec = {}) {
  if (k < 0) throw DomainError("gram_matrix: degree must be ≥ 0");
  return gram_matrix(family, weight, t, MonomialBasis(family.m, k), spec);
}

/// Integer offsets (in units of the step) along the 2n real parameter axes
/// needed for first and second central differences at steps h and 2h.
inline std::vector<std::vector<int>> stencil_offsets(int n, bool two_levels = true) {
  const int d = 2 * n;
  std::vector<std::vector<int>> out;
  out.emplace_back(d, 0);
  for (int s = 1; s <= (two_levels ? 2 : 1); ++s) {
    for (int p = 0; p < d; ++p) {
      for (int sp : {s, -s}) {
        std::vector<int> o(d, 0);
        o[p] = sp;
        out.push_back(o);
      }
      for (int q = p + 1; q < d; ++q) {
        for (int sp : {s, -s}) {
          for (int sq : {s, -s}) {
            std::vector<int> o(d, 0);
            o[p] = sp;
            o[q] = sq;
            out.push_back(o);
          }
        }
      }
    }
  }
  return out;
}

inline CVec offset_point(const CVec& t, const std::vector<int>& offset, double h) {
  const Eigen::Index n = t.size();
  CVec p = t;
  for (Eigen::Index j = 0; j < n; ++j)
    p(j) += cplx(offset[static_cast<std::size_t>(j)] * h, offset[static_cast<std::size_t>(n + j)] * h);
  return p;
}

/// Gram matrices at one grid node together with its differencing stencil.
struct GramNode {
  CVec t;
  std::map<std::vector<int>, CMat> samples;
  double quad_error = 0.0;  // relative to ‖H(t)‖
  const CMat& at(const std::vector<int>& offset) const {
    auto it = samples.find(offset);
    if (it == samples.end()) throw DomainError("chern_curvature: differencing stencil outside the sampled Gram field");
    return it->second;
  }
  const CMat& center() const { return at(std::vector<int>(static_cast<std::size_t>(2 * t.size()), 0)); }
};

struct GramField {
  ParamGrid grid;
  MonomialBasis basis;
  double step = 0.0;        // differencing step of the stencil lattice
  bool richardson = true;
  std::vector<GramNode> nodes;
  bool accuracy_warning = false;
};

/// Lattice step used for differencing: the requested step adjusted so that it
/// divides the grid spacing.
inline double lattice_step(const ParamGrid& grid, double requested) {
  const double spacing = grid.spacing();
  if (spacing <= 0.0 || requested >= spacing) return requested;
  const double ratio = std::round(spacing / requested);
  return spacing / std::max(ratio, 1.0);
}

/// Samples the Gram matrix at every grid node and on the node's differencing
/// stencil. Any non positive definite sample is an InvalidMetricError naming
/// the point.
inline GramField gram_field(const DomainFamily& family, const WeightField& weight, const MonomialBasis& basis,
                            const ParamGrid& grid, const QuadratureSpec& spec, const FdScheme& fd) {
  GramField field;
  field.grid = grid;
  field.basis = basis;
  field.step = lattice_step(grid, fd.step);
  field.richardson = fd.richardson;
  const auto offsets = stencil_offsets(family.n, true);
  for (const CVec& t : grid.nodes()) {
    if (!grid.box.contains(t, 1e-12)) throw DomainError("gram_field: grid node outside parameter box");
    GramNode node;
    node.t = t;
    for (const auto& off : offsets) {
      const CVec p = offset_point(t, off, field.step);
      GramResult g = gram_matrix(family, weight, ParamPoint(p), basis, spec);
      Eigen::LLT<CMat> llt(g.H);
      if (llt.info() != Eigen::Success || !g.H.allFinite())
        throw InvalidMetricError("gram_field: Gram matrix not positive definite at t=" + format_point(p));
      node.quad_error = std::max(node.quad_error, g.error / std::max(g.H.norm(), 1e-300));
      field.accuracy_warning = field.accuracy_warning || g.accuracy_warning;
      node.samples.emplace(off, std::move(g.H));
    }
    field.nodes.push_back(std::move(node));
  }
  return field;
}

inline GramField gram_field(const DomainFamily& family, const WeightField& weight, int k, const ParamGrid& grid,
                            const QuadratureSpec& spec, const FdScheme& fd) {
  return gram_field(family, weight, MonomialBasis(family.m, k), grid, spec, fd);
}

/// Applies a constant change of frame to every sample: H ↦ transform(H).
template <class F>
GramField transform_field(GramField field, const F& transform) {
  for (auto& node : field.nodes)
    for (auto& [off, h] : node.samples) h = transform(h);
  return field;
}

struct LogMetricResult {
  double value = 0.0;
  double error = 0.0;
};

/// ψ(t) = −ln ∫_{Ω_t} |z^α|² e^{−φ_t} dλ for a single character z^α.
inline LogMetricResult character_log_metric(const DomainFamily& family, const WeightField& weight,
                                            const MultiIndex& alpha, const ParamPoint& t,
                                            const QuadratureSpec& spec = {}) {
  const QuadResult q = weighted_monomial_integral(family, weight, t, alpha, alpha, spec);
  const double v = q.value.real();
  if (!(v > 0.0) || !std::isfinite(v))
    throw NumericError("character_log_metric: non-positive or non-finite integral at t=" + format_point(t.t));
  return {-std::log(v), q.error / v};
}

}  // namespace pshlab
