#include <gtest/gtest.h>

#include <random>

#include "pshlab/quadrature.hpp"

using namespace pshlab;

namespace {
// ∫_{Bᵐ(r)} |z^α|² = πᵐ α! r^{2m+2|α|}/(m+|α|)!
double ball_moment(const std::vector<int>& a, double r) {
  const int m = static_cast<int>(a.size());
  double num = std::pow(kPi, m), deg = 0;
  for (int x : a) {
    num *= std::tgamma(x + 1.0);
    deg += x;
  }
  return num * std::pow(r, 2 * m + 2 * deg) / std::tgamma(m + deg + 1.0);
}
const WeightField kZero = WeightField::zero();
}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const GaussRule& g = gauss_legendre(8);
  for (int p = 0; p < 16; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
    EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-14) << p;
  }
}

TEST(FiberVolume, Examples) {
  EXPECT_NEAR(fiber_volume(product_family(1), ParamPoint{0.0}).value.real(), kPi, 1e-12);
  EXPECT_NEAR(fiber_volume(product_family(2), ParamPoint{0.0}).value.real(), kPi * kPi / 2.0, 1e-12);
  const auto hd = hartogs_disk(1.0, 1.0, ParamBox::square(1, 1.0));
  EXPECT_NEAR(fiber_volume(hd, ParamPoint{1.0}).value.real(), kPi * std::exp(-2.0), 1e-12);
  // Quoted as ≈ 0.42510 in the examples; πe⁻² is 0.4251683.
  EXPECT_NEAR(fiber_volume(hd, ParamPoint{1.0}).value.real(), 0.425168, 5e-7);
}

TEST(WeightedMonomial, DiskMoments) {
  const auto disk = product_family(1);
  const QuadResult q = weighted_monomial_integral(disk, kZero, ParamPoint{0.0}, MultiIndex({2}), MultiIndex({2}));
  EXPECT_NEAR(q.value.real(), kPi / 3.0, 1e-12);
  EXPECT_EQ(q.value.imag(), 0.0);
}

TEST(WeightedMonomial, ReinhardtOffDiagonalIsExactlyZero) {
  const auto ann = reinhardt_shadow({0.2, 0.3}, {1.0, 1.0});
  const QuadResult q = weighted_monomial_integral(ann, WeightField::quadratic(1.0, {1.0, 2.0}), ParamPoint{0.1},
                                                  MultiIndex({1, 0}), MultiIndex({0, 1}));
  EXPECT_EQ(q.value, cplx(0.0, 0.0));
  EXPECT_EQ(q.strategy, Strategy::exact_zero);
}

TEST(WeightedMonomial, CircularDifferentDegreesIsExactlyZero) {
  const auto ce = circular_ellipsoid(0.6);
  const QuadResult q = weighted_monomial_integral(ce, kZero, ParamPoint{0.0}, MultiIndex({1, 0}), MultiIndex({1, 1}));
  EXPECT_EQ(q.value, cplx(0.0, 0.0));
}

TEST(WeightedMonomial, GaussianWeightIncompleteGamma) {
  const auto disk = product_family(1);
  const auto w = WeightField::quadratic(0.0, {1.0});
  for (int k = 0; k <= 3; ++k) {
    // γ(k+1, 1) = k!(1 − e⁻¹ Σ_{j≤k} 1/j!)
    double partial = 0.0, fact = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) fact *= j;
      partial += 1.0 / fact;
    }
    const double exact = kPi * fact * (1.0 - std::exp(-1.0) * partial);
    const QuadResult q = weighted_monomial_integral(disk, w, ParamPoint{0.0}, MultiIndex({k}), MultiIndex({k}));
    EXPECT_NEAR(q.value.real(), exact, 1e-12) << k;
    EXPECT_LE(std::abs(q.value.real() - exact), q.error + 1e-15);
  }
  EXPECT_NEAR(kPi * (1.0 - std::exp(-1.0)), 1.98587, 5e-6);
}

TEST(WeightedMonomial, BallFactorialFormula) {
  for (int m = 1; m <= 2; ++m) {
    const auto ball = product_family(m);
    for (int deg = 0; deg <= 3; ++deg) {
      std::vector<MultiIndex> idx;
      if (m == 1) idx.emplace_back(std::vector<int>{deg});
      else
        for (int a = 0; a <= deg; ++a) idx.emplace_back(std::vector<int>{a, deg - a});
      for (const auto& a : idx) {
        const double got = weighted_monomial_integral(ball, kZero, ParamPoint{0.0}, a, a).value.real();
        EXPECT_NEAR(got, ball_moment(a.alpha, 1.0), 1e-8) << a.str();
      }
    }
  }
}

TEST(WeightedMonomial, CircularEllipsoidMatchesClosedForm) {
  // ∫ z_a z̄_b over {z*Qz < R²} = (π² R⁶/6)(Q⁻¹)_{ab}/det Q.
  const double b = 0.6;
  const auto ce = circular_ellipsoid(b);
  QuadratureSpec spec;
  spec.order = 32;
  spec.angular_order = 32;
  Eigen::Matrix2d q;
  q << 1.0, b / 2, b / 2, 1.0;
  const Eigen::Matrix2d qi = q.inverse();
  const double scale = kPi * kPi / 6.0 / q.determinant();
  const MultiIndex e1({1, 0}), e2({0, 1});
  EXPECT_NEAR(weighted_monomial_integral(ce, kZero, ParamPoint{0.0}, e1, e1, spec).value.real(), scale * qi(0, 0), 1e-9);
  EXPECT_NEAR(weighted_monomial_integral(ce, kZero, ParamPoint{0.0}, e2, e2, spec).value.real(), scale * qi(1, 1), 1e-9);
  // Convention: H_ab = ∫ z^{α_a} z̄^{α_b}, so (e1, e2) pairs z₁ with z̄₂.
  const cplx off = weighted_monomial_integral(ce, kZero, ParamPoint{0.0}, e1, e2, spec).value;
  EXPECT_NEAR(off.real(), scale * qi(1, 0), 1e-9);
  EXPECT_NEAR(off.imag(), 0.0, 1e-12);
}

TEST(WeightedMonomial, NegativeExponentTouchingAxisIsDomainError) {
  EXPECT_THROW(weighted_monomial_integral(hartogs_disk(), kZero, ParamPoint{0.0}, MultiIndex({-1}), MultiIndex({-1})),
               DomainError);
  // Bounded away from the axis: ∫_{a<|z|<b} |z|^{-2} = 2π ln(b/a).
  const auto ann = reinhardt_shadow({0.5}, {1.0}, 0.0, 0.0);
  const double v =
      weighted_monomial_integral(ann, kZero, ParamPoint{0.0}, MultiIndex({-1}), MultiIndex({-1})).value.real();
  EXPECT_NEAR(v, 2.0 * kPi * std::log(2.0), 1e-10);
}

TEST(TubeBaseIntegral, Examples) {
  const auto flat = tube_family(1, 1.0, 0.0);
  EXPECT_NEAR(tube_base_integral(flat, kZero, ParamPoint{0.0}).value.real(), 2.0, 1e-13);
  const auto shrinking = tube_family(1, 1.0, 1.0);
  EXPECT_NEAR(tube_base_integral(shrinking, kZero, ParamPoint{0.0}).value.real(), 2.0, 1e-13);
  EXPECT_NEAR(tube_base_integral(shrinking, kZero, ParamPoint{0.6}).value.real(), 1.6, 1e-13);
  const auto w = WeightField::tube_polynomial(1.0, 1.0, 0.0);
  EXPECT_NEAR(tube_base_integral(flat, w, ParamPoint{0.0}).value.real(), std::sqrt(kPi) * std::erf(1.0), 1e-13);
  EXPECT_NEAR(std::sqrt(kPi) * std::erf(1.0), 1.49365, 5e-6);
}

TEST(TubeBaseIntegral, RejectsNonTubeFamily) {
  EXPECT_THROW(tube_base_integral(hartogs_disk(), kZero, ParamPoint{0.0}), DomainError);
}

TEST(QuadratureProperties, ConjugateSymmetry) {
  const auto ce = circular_ellipsoid(0.8);
  QuadratureSpec spec;
  spec.order = 24;
  spec.angular_order = 24;
  const MultiIndex a({2, 0}), b({1, 1});
  const cplx ab = weighted_monomial_integral(ce, kZero, ParamPoint{0.1}, a, b, spec).value;
  const cplx ba = weighted_monomial_integral(ce, kZero, ParamPoint{0.1}, b, a, spec).value;
  EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-15);
}

TEST(QuadratureProperties, DiagonalPositive) {
  std::mt19937_64 rng(4);
  for (const auto& f : {hartogs_disk(), shrinking_ball(2), ellipsoid_reinhardt({1.0, 0.5}), circular_ellipsoid(0.5)}) {
    const CVec t = detail::random_param(f.param_box, rng);
    const MultiIndex a(std::vector<int>(static_cast<std::size_t>(f.m), 1));
    QuadratureSpec spec;
    spec.order = 24;
    spec.angular_order = 24;
    const cplx v = weighted_monomial_integral(f, kZero, ParamPoint(t), a, a, spec).value;
    EXPECT_GT(v.real(), 0.0);
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(QuadratureProperties, ScalingLaw) {
  for (double lambda : {0.5, 2.0}) {
    for (int k = 0; k <= 2; ++k) {
      const double base =
          weighted_monomial_integral(product_family(1, 1.0), kZero, ParamPoint{0.0}, MultiIndex({k}), MultiIndex({k}))
              .value.real();
      const double scaled =
          weighted_monomial_integral(product_family(1, lambda), kZero, ParamPoint{0.0}, MultiIndex({k}), MultiIndex({k}))
              .value.real();
      EXPECT_NEAR(scaled / base, std::pow(lambda, 2 * k + 2), 1e-12);
    }
  }
}

TEST(QuadratureProperties, RefinementConvergence) {
  QuadratureSpec lo, hi;
  hi.order = 2 * lo.order;
  std::vector<std::pair<DomainFamily, WeightField>> cases = {
      {hartogs_disk(), kZero},
      {shrinking_ball(2), WeightField::quadratic(0.5, {1.0, 2.0})},
      {reinhardt_shadow({0.3, 0.0}, {1.0, 0.8}, 1.0, 1.0), kZero},
      {ellipsoid_reinhardt({1.0, 0.5}), kZero}};
  for (const auto& [f, w] : cases) {
    const MultiIndex a(std::vector<int>(static_cast<std::size_t>(f.m), 1));
    const QuadResult q1 = weighted_monomial_integral(f, w, ParamPoint{cplx(0.2, 0.1)}, a, a, lo);
    const QuadResult q2 = weighted_monomial_integral(f, w, ParamPoint{cplx(0.2, 0.1)}, a, a, hi);
    EXPECT_LE(std::abs(q1.value - q2.value), q1.error) << to_string(f.kind);
  }
  const auto tube = tube_family(2, 1.0, 0.5);
  const auto w = WeightField::tube_polynomial(1.0, 1.0, 0.3);
  const QuadResult q1 = tube_base_integral(tube, w, ParamPoint{0.3}, lo);
  const QuadResult q2 = tube_base_integral(tube, w, ParamPoint{0.3}, hi);
  EXPECT_LE(std::abs(q1.value - q2.value), q1.error);
}

TEST(QuadratureProperties, LowOrderFlagsAccuracyWarning) {
  QuadratureSpec spec;
  spec.order = 2;
  spec.tolerance = 1e-14;
  const QuadResult q = weighted_monomial_integral(ellipsoid_reinhardt({1.0, 0.5}), kZero, ParamPoint{0.0},
                                                  MultiIndex({0, 0}), MultiIndex({0, 0}), spec);
  EXPECT_TRUE(q.accuracy_warning);
}

TEST(MultiIndex, Basics) {
  const MultiIndex a({2, 1});
  EXPECT_EQ(a.degree(), 3);
  EXPECT_FALSE(a.has_negative());
  EXPECT_TRUE(MultiIndex({-1}).has_negative());
  EXPECT_NEAR(std::abs(monomial(a, (CVec(2) << cplx(0, 1), 2.0).finished()) + 2.0), 0.0, 1e-15);
}
