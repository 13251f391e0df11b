#include <gtest/gtest.h>

#include <random>

#include "pshlab/corollaries.hpp"

using namespace pshlab;

namespace {
ParamGrid grid3(double half = 0.5) {
  ParamGrid g;
  g.box = ParamBox::square(1, half);
  g.resolution = 3;
  return g;
}
const std::vector<RVec> kOrigin{RVec::Zero(1)};
const RVec kT0 = RVec::Zero(1);
}  // namespace

TEST(NegLogVolume, Examples) {
  EXPECT_NEAR(neg_log_volume(product_family(1), ParamPoint{0.0}).value, -std::log(kPi), 1e-13);
  const auto hd = hartogs_disk(1.0, 1.0, ParamBox::square(1, 1.0));
  EXPECT_NEAR(neg_log_volume(hd, ParamPoint{1.0}).value, 2.0 - std::log(kPi), 1e-12);
  EXPECT_NEAR(2.0 - std::log(kPi), 0.85527, 5e-6);
  EXPECT_NEAR(neg_log_volume(convex_ball(1), kT0).value, -std::log(2.0), 1e-13);
  EXPECT_NEAR(-std::log(2.0), -0.69315, 5e-6);
  EXPECT_NEAR(neg_log_volume(tube_family(1, 1.0, 1.0), ParamPoint{0.6}).value, -std::log(1.6), 1e-12);
}

TEST(NegLogVolume, EmptyConvexFiberIsDomainError) {
  EXPECT_THROW(neg_log_volume(convex_ball(1, 0.5, {-1.0, 1.0}), RVec::Constant(1, 0.9)), DomainError);
}

TEST(PrekopaMarginal, ZeroWeightIsNegLogVolumeBitwise) {
  for (const auto& f : {hartogs_disk(), shrinking_ball(2), ellipsoid_reinhardt({1.0, 0.5}), tube_family(2, 1.0, 0.5)}) {
    const ParamPoint t{cplx(0.15, -0.2)};
    EXPECT_EQ(prekopa_marginal(f, WeightField::zero(), t).value, neg_log_volume(f, t).value) << to_string(f.kind);
  }
  RealWeight zero = [](const RVec&, const RVec&) { return 0.0; };
  EXPECT_EQ(prekopa_marginal(convex_ball(2), zero, RVec::Constant(1, 0.3)).value,
            neg_log_volume(convex_ball(2), RVec::Constant(1, 0.3)).value);
}

TEST(PrekopaMarginal, ConvexGaussianErrorFunction) {
  RealWeight w = [](const RVec& t, const RVec& x) { return t.squaredNorm() + x.squaredNorm(); };
  const double v = prekopa_marginal(convex_interval(1.0), w, kT0).value;
  EXPECT_NEAR(v, -std::log(std::sqrt(kPi) * std::erf(1.0)), 1e-13);
  // Printed to five places as −0.40123; the closed form is −0.4012216.
  EXPECT_NEAR(v, -0.40123, 1e-5);
  const double t = 0.3;
  EXPECT_NEAR(prekopa_marginal(convex_interval(1.0), w, RVec::Constant(1, t)).value, t * t + v, 1e-13);
}

TEST(PrekopaMarginal, HartogsClosedFormAndMargin) {
  const cplx t(0.2, 0.3);
  EXPECT_NEAR(prekopa_marginal(hartogs_disk(), WeightField::zero(), ParamPoint{t}).value,
              2.0 * std::norm(t) - std::log(kPi), 1e-12);
  PointField f = [](const CVec& s) { return prekopa_marginal(hartogs_disk(), WeightField::zero(), ParamPoint(s)).value; };
  EXPECT_NEAR(strict_psh_margin(f, grid3(), {1e-2, true}).margin, 2.0, 1e-7);
}

TEST(TubeToReinhardt, FlatIntervalExample) {
  const auto tube = tube_family(1, 1.0, 0.0);
  const auto [image, psi] = tube_to_reinhardt(tube, WeightField::zero());
  EXPECT_EQ(image.symmetry, Symmetry::reinhardt);
  const auto& shadow = std::get<ShadowForm>(image.fiber).shadow;
  const Interval iv = shadow.limits(CVec::Zero(1), 0, {});
  EXPECT_NEAR(iv.lo, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(iv.hi, std::exp(1.0), 1e-15);
  EXPECT_NEAR(psi(CVec::Zero(1), CVec::Constant(1, 2.0)), 2.0 * std::log(2.0), 1e-15);
  const double direct = prekopa_marginal(tube, WeightField::zero(), ParamPoint{0.0}).value;
  const double bridged = tube_marginal_via_reinhardt(tube, WeightField::zero(), ParamPoint{0.0}).value;
  EXPECT_NEAR(direct, -std::log(2.0), 1e-13);
  EXPECT_NEAR(bridged, direct, 1e-12);
}

TEST(TubeToReinhardt, LinearWeightExample) {
  const auto tube = tube_family(1, 1.0, 0.0);
  const auto w = WeightField::tube_polynomial(0.0, 0.0, 1.0);
  const double expect = -std::log(std::exp(1.0) - std::exp(-1.0));
  EXPECT_NEAR(std::exp(1.0) - std::exp(-1.0), 2.35040, 5e-6);
  EXPECT_NEAR(prekopa_marginal(tube, w, ParamPoint{0.0}).value, expect, 1e-13);
  EXPECT_NEAR(tube_marginal_via_reinhardt(tube, w, ParamPoint{0.0}).value, expect, 1e-12);
}

TEST(TubeToReinhardt, ConstantBaseGivesConstantMarginals) {
  const auto tube = tube_family(1, 1.0, 0.0);
  const auto w = WeightField::tube_polynomial(0.0, 1.0, 0.5);
  const double a = tube_marginal_via_reinhardt(tube, w, ParamPoint{0.0}).value;
  for (cplx t : {cplx(0.3, 0.0), cplx(-0.2, 0.4)}) {
    EXPECT_NEAR(tube_marginal_via_reinhardt(tube, w, ParamPoint{t}).value, a, 1e-13);
    EXPECT_NEAR(prekopa_marginal(tube, w, ParamPoint{t}).value, a, 1e-12);
  }
}

TEST(TubeToReinhardt, BridgeIdentityOnBuiltinTubes) {
  const std::vector<std::pair<DomainFamily, WeightField>> cases = {
      {tube_family(1, 1.0, 1.0), WeightField::zero()},
      {tube_family(1, 1.0, 1.0), WeightField::tube_polynomial(1.0, 1.0, 0.0)},
      {tube_family(2, 1.0, 0.5), WeightField::tube_polynomial(1.0, 1.0, 0.3)},
      {tube_family(2, 1.0, 0.0), WeightField::zero()}};
  for (const auto& [f, w] : cases)
    for (cplx t : {cplx(0.0), cplx(0.4, 0.1), cplx(-0.3, -0.2)}) {
      const ScalarResult direct = prekopa_marginal(f, w, ParamPoint{t});
      const ScalarResult bridged = tube_marginal_via_reinhardt(f, w, ParamPoint{t});
      EXPECT_NEAR(direct.value, bridged.value, 1e-6) << w.name << " m=" << f.m;
    }
}

TEST(TubeToReinhardt, RejectsNonTubeInput) {
  EXPECT_THROW(tube_to_reinhardt(hartogs_disk(), WeightField::zero()), DomainError);
  EXPECT_THROW(tube_to_reinhardt(tube_family(), WeightField::quadratic(1.0, {1.0})), DomainError);
}

TEST(BrunnMinkowski, BallExamples) {
  EXPECT_NEAR(brunn_minkowski_margin(convex_ball(1), kOrigin, {1e-2, true}).margin, 1.0, 1e-6);
  EXPECT_NEAR(brunn_minkowski_margin(convex_ball(2), kOrigin, {1e-2, true}).margin, 2.0, 1e-6);
}

TEST(BrunnMinkowski, SlidingIntervalIsFlatAndRejected) {
  const auto f = sliding_interval(1.0);
  EXPECT_NEAR(brunn_minkowski_margin(f, kOrigin, {1e-2, true}).margin, 0.0, 1e-8);
  EXPECT_THROW(validate_convex_family(f), ConfigError);
  EXPECT_NO_THROW(validate_convex_family(convex_ball(2)));
}

TEST(BrunnMinkowski, MarginsMatchClosedFormOnGrid) {
  // f(t) = const − (m/2) ln(1 − t²), f'' = m(1 + t²)/(1 − t²)².
  RealGrid g;
  g.box = {{-0.5, 0.5}};
  g.resolution = 5;
  for (int m : {1, 2}) {
    const auto f = convex_ball(m);
    for (const RVec& t : g.nodes()) {
      const double s = t(0) * t(0);
      const MarginResult r = brunn_minkowski_margin(f, {t}, {1e-2, true});
      EXPECT_GE(r.margin, 0.0);
      EXPECT_NEAR(r.margin, m * (1.0 + s) / ((1.0 - s) * (1.0 - s)), 1e-3);
    }
  }
}

TEST(DetMetricNorm, Examples) {
  EXPECT_NEAR(det_metric_norm(hermitian_finsler(CMat::Identity(1, 1)), ParamPoint{0.0}).value, 1.0 / kPi, 1e-15);
  EXPECT_NEAR(det_metric_norm(hermitian_finsler(CMat::Constant(1, 1, 4.0)), ParamPoint{0.0}).value, 4.0 / kPi, 1e-14);
  EXPECT_NEAR(4.0 / kPi, 1.27324, 5e-6);
  const ScalarResult l1 = det_metric_norm(l1_finsler({1.0, 1.0}), ParamPoint{0.0});
  EXPECT_NEAR(l1.value, 6.0 / (kPi * kPi), 1e-12);
  EXPECT_NEAR(l1.value, 0.60793, 5e-6);
}

TEST(DetMetricNorm, DegenerateBallIsDomainError) {
  FinslerMetric zero;
  zero.m = 1;
  zero.h = [](const CVec&, const CVec&) { return 0.0; };
  EXPECT_THROW(det_metric_norm(zero, ParamPoint{0.0}), DomainError);
  EXPECT_THROW(det_metric_norm(hermitian_finsler(CMat::Identity(3, 3)), ParamPoint{0.0}), DomainError);
}

TEST(DetMetricNorm, HermitianReductionOnRandomG) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 1 + trial % 2;
    CMat a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = cplx(g(rng), g(rng));
    const CMat G = a * a.adjoint() + 0.5 * CMat::Identity(m, m);
    const double expect = std::tgamma(m + 1.0) * G.determinant().real() / std::pow(kPi, m);
    EXPECT_NEAR(det_metric_norm(hermitian_finsler(G), ParamPoint{0.0}).value / expect, 1.0, 1e-6) << trial;
  }
}

TEST(DetMetricCurvature, Examples) {
  EXPECT_NEAR(det_metric_curvature(hermitian_finsler(CMat::Identity(1, 1), 1.0), grid3(), {1e-2, true}).margin, 2.0,
              1e-8);
  EXPECT_NEAR(det_metric_curvature(hermitian_finsler(CMat::Identity(1, 1), 0.0), grid3(), {1e-2, true}).margin, 0.0,
              1e-8);
  EXPECT_NEAR(det_metric_curvature(hermitian_finsler(CMat::Identity(2, 2), 1.0), grid3(), {1e-2, true}).margin, 4.0,
              1e-6);
  EXPECT_NEAR(det_metric_curvature(l1_finsler({1.0, 2.0}, 1.0), grid3(), {1e-2, true}).margin, 4.0, 1e-6);
}

TEST(FinslerMetric, HomogeneityAndSpotCheck) {
  const ParamBox box = ParamBox::square(1, 0.5);
  EXPECT_LE(finsler_homogeneity_residual(hermitian_finsler(CMat::Identity(2, 2), 1.0), box), 1e-12);
  EXPECT_LE(finsler_homogeneity_residual(l1_finsler({1.0, 2.0}, 1.0), box), 1e-12);
  EXPECT_TRUE(finsler_curvature_spot_check(hermitian_finsler(CMat::Identity(2, 2), 1.0), box).pass);
  EXPECT_TRUE(finsler_curvature_spot_check(l1_finsler({1.0, 2.0}, 1.0), box).pass);
}
