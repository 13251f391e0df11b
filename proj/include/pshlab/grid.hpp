#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pshlab/types.hpp"

namespace pshlab {

/// Closed real interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Compact box in ℂⁿ given by real and imaginary ranges per coordinate.
struct ParamBox {
  std::vector<Interval> re;
  std::vector<Interval> im;

  static ParamBox square(int n, double half_width) {
    ParamBox b;
    b.re.assign(n, {-half_width, half_width});
    b.im.assign(n, {-half_width, half_width});
    return b;
  }
  static ParamBox real_segment(int n, Interval r) {
    ParamBox b;
    b.re.assign(n, r);
    b.im.assign(n, {0.0, 0.0});
    return b;
  }

  int dim() const { return static_cast<int>(re.size()); }

  double width() const {
    double w = 0.0;
    for (const auto& i : re) w = std::max(w, i.width());
    for (const auto& i : im) w = std::max(w, i.width());
    return w;
  }

  CVec center() const {
    CVec c(dim());
    for (int j = 0; j < dim(); ++j) c(j) = cplx(re[j].mid(), im[j].mid());
    return c;
  }

  /// Membership in the box enlarged by `margin` on every side.
  bool contains(const CVec& t, double margin = 0.0) const {
    if (t.size() != dim()) return false;
    for (int j = 0; j < dim(); ++j) {
      if (t(j).real() < re[j].lo - margin || t(j).real() > re[j].hi + margin) return false;
      if (t(j).imag() < im[j].lo - margin || t(j).imag() > im[j].hi + margin) return false;
    }
    return true;
  }
};

/// Uniform lattice over a ParamBox with `resolution` points per non-degenerate
/// real axis (degenerate axes contribute their single value).
struct ParamGrid {
  ParamBox box;
  int resolution = 1;

  std::vector<CVec> nodes() const {
    const int n = box.dim();
    std::vector<std::vector<double>> axes;
    for (int j = 0; j < n; ++j) axes.push_back(axis_values(box.re[j]));
    for (int j = 0; j < n; ++j) axes.push_back(axis_values(box.im[j]));
    std::vector<CVec> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      CVec t(n);
      for (int j = 0; j < n; ++j) t(j) = cplx(axes[j][idx[j]], axes[n + j][idx[n + j]]);
      out.push_back(t);
      // Last imaginary axis varies slowest, first real axis fastest.
      std::size_t a = 0;
      while (a < idx.size()) {
        if (++idx[a] < axes[a].size()) break;
        idx[a] = 0;
        ++a;
      }
      if (a == idx.size()) break;
    }
    return out;
  }

  /// Smallest non-zero spacing between adjacent nodes along any axis.
  double spacing() const {
    double s = 0.0;
    auto upd = [&](const Interval& i) {
      if (resolution > 1 && i.width() > 0.0) {
        const double d = i.width() / (resolution - 1);
        s = (s == 0.0) ? d : std::min(s, d);
      }
    };
    for (const auto& i : box.re) upd(i);
    for (const auto& i : box.im) upd(i);
    return s;
  }

 private:
  std::vector<double> axis_values(const Interval& i) const {
    if (resolution <= 1 || i.width() == 0.0) return {i.mid()};
    std::vector<double> v(resolution);
    for (int k = 0; k < resolution; ++k)
      v[k] = i.lo + i.width() * static_cast<double>(k) / (resolution - 1);
    return v;
  }
};

/// Uniform lattice on a real box (used for convex families).
struct RealGrid {
  std::vector<Interval> box;
  int resolution = 1;

  std::vector<RVec> nodes() const {
    const int d = static_cast<int>(box.size());
    std::vector<RVec> out;
    std::vector<int> idx(d, 0);
    auto count = [&](int a) { return (resolution <= 1 || box[a].width() == 0.0) ? 1 : resolution; };
    while (true) {
      RVec x(d);
      for (int a = 0; a < d; ++a) {
        const int c = count(a);
        x(a) = c == 1 ? box[a].mid() : box[a].lo + box[a].width() * idx[a] / (c - 1.0);
      }
      out.push_back(x);
      int a = 0;
      while (a < d) {
        if (++idx[a] < count(a)) break;
        idx[a] = 0;
        ++a;
      }
      if (a == d) break;
    }
    return out;
  }
};

}  // namespace pshlab
