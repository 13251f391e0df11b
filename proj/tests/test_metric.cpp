#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "pshlab/curvature.hpp"
#include "pshlab/metric.hpp"

using namespace pshlab;

namespace {
long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
ParamGrid grid3(double half = 0.3) {
  ParamGrid g;
  g.box = ParamBox::square(1, half);
  g.resolution = 3;
  return g;
}
const double kPi2over6 = kPi * kPi / 6.0;
}  // namespace

TEST(MonomialBasis, SizeAndOrdering) {
  for (int m = 1; m <= 4; ++m)
    for (int k = 0; k <= 5; ++k) EXPECT_EQ(MonomialBasis(m, k).size(), binomial(m + k - 1, k)) << m << "," << k;
  const MonomialBasis b(2, 2);
  ASSERT_EQ(b.size(), 3);
  EXPECT_EQ(b.indices[0], MultiIndex({2, 0}));
  EXPECT_EQ(b.indices[1], MultiIndex({1, 1}));
  EXPECT_EQ(b.indices[2], MultiIndex({0, 2}));
  EXPECT_THROW(MonomialBasis(0, 1), DomainError);
  EXPECT_THROW(MonomialBasis(1, -1), DomainError);
}

TEST(GramMatrix, Examples) {
  const CMat disk = gram_matrix(product_family(1), WeightField::zero(), ParamPoint{0.0}, 0).H;
  ASSERT_EQ(disk.rows(), 1);
  EXPECT_NEAR(disk(0, 0).real(), kPi, 1e-12);

  const CMat ball = gram_matrix(product_family(2), WeightField::zero(), ParamPoint{0.0}, 1).H;
  EXPECT_NEAR((ball - kPi2over6 * CMat::Identity(2, 2)).norm(), 0.0, 1e-12);

  const auto ann = reinhardt_shadow({0.2, 0.3}, {1.0, 0.9}, 1.0, 1.0);
  for (int k = 1; k <= 3; ++k) {
    const CMat h = gram_matrix(ann, WeightField::quadratic(1.0, {1.0, 0.5}), ParamPoint{cplx(0.1, 0.2)}, k).H;
    for (Eigen::Index a = 0; a < h.rows(); ++a)
      for (Eigen::Index b = 0; b < h.cols(); ++b)
        if (a != b) {
          EXPECT_EQ(h(a, b), cplx(0.0, 0.0));
        }
  }
  EXPECT_THROW(gram_matrix(product_family(1), WeightField::zero(), ParamPoint{0.0}, -1), DomainError);
}

TEST(GramMatrix, FactorialFormulaOnUnitBall) {
  for (int m = 1; m <= 2; ++m) {
    for (int k = 0; k <= 3; ++k) {
      const MonomialBasis basis(m, k);
      const CMat h = gram_matrix(product_family(m), WeightField::zero(), ParamPoint{0.0}, basis).H;
      for (int a = 0; a < basis.size(); ++a) {
        double expect = std::pow(kPi, m) / std::tgamma(m + k + 1.0);
        for (int x : basis.indices[static_cast<std::size_t>(a)].alpha) expect *= std::tgamma(x + 1.0);
        EXPECT_NEAR(h(a, a).real(), expect, 1e-8);
      }
    }
  }
}

TEST(GramMatrix, CircularFiberIsHermitianPositiveDefinite) {
  QuadratureSpec spec;
  spec.order = 24;
  const CMat h = gram_matrix(circular_ellipsoid(0.8), WeightField::zero(), ParamPoint{cplx(0.1, -0.2)}, 2, spec).H;
  EXPECT_LE(hermitian_residual(h), 1e-12 * h.norm());
  EXPECT_GT(min_eigenvalue(h), 0.0);
  EXPECT_GT(std::abs(h(0, 1)), 1e-3);
}

TEST(GramMatrix, BasisPermutationConjugates) {
  QuadratureSpec spec;
  spec.order = 24;
  const auto f = circular_ellipsoid(0.8);
  const MonomialBasis b(2, 2);
  std::vector<MultiIndex> rev(b.indices.rbegin(), b.indices.rend());
  const CMat h = gram_matrix(f, WeightField::zero(), ParamPoint{0.1}, b, spec).H;
  const CMat hr = gram_matrix(f, WeightField::zero(), ParamPoint{0.1}, MonomialBasis::explicit_list(rev), spec).H;
  Eigen::PermutationMatrix<Eigen::Dynamic> p(3);
  p.indices() << 2, 1, 0;
  EXPECT_LE((p * h * p.transpose() - hr).norm(), 1e-14 * h.norm());
}

TEST(GramField, ProductFamilyIsConstant) {
  const GramField field =
      gram_field(product_family(2), WeightField::zero(), 1, grid3(), QuadratureSpec{}, FdScheme{1e-2, true});
  ASSERT_EQ(field.nodes.size(), 9u);
  const CMat ref = field.nodes.front().center();
  for (const auto& node : field.nodes)
    for (const auto& [off, h] : node.samples) EXPECT_EQ(h, ref);
}

TEST(GramField, HartogsAndShrinkingBallValues) {
  const GramField hd = gram_field(hartogs_disk(), WeightField::zero(), 0, grid3(), QuadratureSpec{}, FdScheme{1e-2, true});
  for (const auto& node : hd.nodes)
    EXPECT_NEAR(node.center()(0, 0).real(), kPi * std::exp(-2.0 * node.t.squaredNorm()), 1e-12);

  const GramField sb =
      gram_field(shrinking_ball(2), WeightField::zero(), 1, grid3(), QuadratureSpec{}, FdScheme{1e-2, true});
  for (const auto& node : sb.nodes) {
    const CMat expect = kPi2over6 * std::exp(-6.0 * node.t.squaredNorm()) * CMat::Identity(2, 2);
    EXPECT_NEAR((node.center() - expect).norm(), 0.0, 1e-12);
    if (node.t.norm() == 0.0) {
      EXPECT_NEAR(node.center()(0, 0).real(), 1.64493, 5e-6);
    }
  }
}

TEST(GramField, InvariantsHoldAtEverySample) {
  const auto f = reinhardt_shadow({0.2, 0.0}, {1.0, 1.0}, 1.0, 1.0);
  const GramField field =
      gram_field(f, WeightField::quadratic(0.5, {1.0, 2.0}), 2, grid3(0.2), QuadratureSpec{}, FdScheme{1e-2, true});
  for (const auto& node : field.nodes) {
    for (const auto& [off, h] : node.samples) {
      EXPECT_LE(hermitian_residual(h), 1e-12 * h.norm());
      EXPECT_EQ(Eigen::LLT<CMat>(h).info(), Eigen::Success);
      for (Eigen::Index a = 0; a < h.rows(); ++a)
        for (Eigen::Index b = 0; b < h.cols(); ++b)
          if (a != b) {
            EXPECT_EQ(h(a, b), cplx(0.0, 0.0));
          }
    }
  }
}

TEST(GramField, StencilStepDividesSpacing) {
  const GramField field =
      gram_field(hartogs_disk(), WeightField::zero(), 0, grid3(), QuadratureSpec{}, FdScheme{0.013, true});
  const double ratio = grid3().spacing() / field.step;
  EXPECT_NEAR(ratio, std::round(ratio), 1e-12);
}

TEST(CharacterLogMetric, Examples) {
  const QuadratureSpec spec;
  EXPECT_NEAR(character_log_metric(product_family(1), WeightField::zero(), MultiIndex({0}), ParamPoint{0.0}).value,
              -std::log(kPi), 1e-13);
  EXPECT_NEAR(-std::log(kPi), -1.14473, 5e-6);

  const double hd = character_log_metric(hartogs_disk(), WeightField::zero(), MultiIndex({1}), ParamPoint{0.0}).value;
  EXPECT_NEAR(hd, std::log(2.0 / kPi), 1e-13);
  EXPECT_NEAR(hd, -0.45158, 5e-6);
  const cplx t(0.2, -0.3);
  EXPECT_NEAR(character_log_metric(hartogs_disk(), WeightField::zero(), MultiIndex({1}), ParamPoint{t}).value,
              4.0 * std::norm(t) + std::log(2.0 / kPi), 1e-12);

  const double g = character_log_metric(product_family(1), WeightField::quadratic(0.0, {1.0}), MultiIndex({0}),
                                        ParamPoint{0.0}, spec)
                       .value;
  EXPECT_NEAR(g, -std::log(kPi * (1.0 - std::exp(-1.0))), 1e-12);
  // Printed to five places as −0.68607; the closed form is −0.6860557.
  EXPECT_NEAR(g, -0.68607, 2e-5);
}

TEST(CharacterLogMetric, BitwiseEqualToGramDiagonal) {
  const auto f = shrinking_ball(2);
  const auto w = WeightField::quadratic(1.0, {1.0, 0.5});
  const ParamPoint t{cplx(0.1, 0.25)};
  const MonomialBasis basis(2, 3);
  const CMat h = gram_matrix(f, w, t, basis).H;
  for (int a = 0; a < basis.size(); ++a) {
    const double psi = character_log_metric(f, w, basis.indices[static_cast<std::size_t>(a)], t).value;
    EXPECT_EQ(psi, -std::log(h(a, a).real()));
  }
}
