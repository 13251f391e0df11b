#include <gtest/gtest.h>

#include <random>

#include "pshlab/family.hpp"
#include "pshlab/psh_toolkit.hpp"

using namespace pshlab;

namespace {

// Midpoint rule on the defining double integral, no closed forms.
double reg_max_brute(double eta1, double eta2, double t1, double t2, int n = 2000) {
  auto kernel = [](double s) { return 315.0 / 256.0 * std::pow(1.0 - s * s, 4); };
  const double h = 2.0 / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s1 = -1.0 + (i + 0.5) * h;
    const double k1 = kernel(s1);
    for (int j = 0; j < n; ++j) {
      const double s2 = -1.0 + (j + 0.5) * h;
      total += std::max(t1 + eta1 * s1, t2 + eta2 * s2) * k1 * kernel(s2);
    }
  }
  return total * h * h;
}

// Frozen from reg_max at kernel order 64 and confirmed by reg_max_brute.
constexpr double kRegMaxOrigin = 0.17185910065167031;

ParamGrid grid3() {
  ParamGrid g;
  g.box = ParamBox::square(1, 0.5);
  g.resolution = 3;
  return g;
}

}  // namespace

TEST(RegMax, SeparatedArgumentsReturnTheLarger) {
  EXPECT_NEAR(reg_max({}, 5.0, 0.0), 5.0, 1e-14);
  EXPECT_NEAR(reg_max({}, 0.0, 5.0), 5.0, 1e-14);
  EXPECT_NEAR(reg_max({0.5, 2.0}, -1.0, 3.0), 3.0, 1e-14);
}

TEST(RegMax, FrozenValueAtOrigin) {
  EXPECT_NEAR(reg_max({1.0, 1.0, 64}, 0.0, 0.0), kRegMaxOrigin, 1e-15);
  EXPECT_NEAR(reg_max({1.0, 1.0, 32}, 0.0, 0.0), kRegMaxOrigin, 1e-14);
  EXPECT_NEAR(reg_max_brute(1.0, 1.0, 0.0, 0.0), kRegMaxOrigin, 1e-5);
}

TEST(RegMax, AgreesWithBruteForceOffDiagonal) {
  for (auto [e1, e2, t1, t2] : {std::array<double, 4>{1.0, 1.0, 0.3, -0.2}, {0.5, 2.0, 0.1, 0.7}, {2.0, 0.3, -1.0, 0.4}})
    EXPECT_NEAR(reg_max({e1, e2}, t1, t2), reg_max_brute(e1, e2, t1, t2, 1000), 2e-5);
}

TEST(RegMax, NonPositiveEtaIsDomainError) {
  EXPECT_THROW(reg_max({0.0, 1.0}, 0.0, 0.0), DomainError);
  EXPECT_THROW(reg_max({1.0, -1.0}, 0.0, 0.0), DomainError);
}

TEST(RegMaxProperties, BoundsOnThousandRandomInputs) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> t(-3.0, 3.0), eta(0.05, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const RegMaxParams p{eta(rng), eta(rng)};
    const double a = t(rng), b = t(rng);
    const double v = reg_max(p, a, b);
    EXPECT_GE(v, std::max(a, b) - 1e-12);
    EXPECT_LE(v, std::max(a + p.eta1, b + p.eta2) + 1e-12);
  }
}

TEST(RegMaxProperties, MonotoneConvexSymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(-2.0, 2.0), d(0.0, 1.0);
  const RegMaxParams p{0.7, 0.7};
  for (int i = 0; i < 300; ++i) {
    const double a = t(rng), b = t(rng), c = t(rng), e = t(rng), delta = d(rng);
    EXPECT_GE(reg_max(p, a + delta, b), reg_max(p, a, b) - 1e-13);
    EXPECT_GE(reg_max(p, a, b + delta), reg_max(p, a, b) - 1e-13);
    EXPECT_LE(reg_max(p, 0.5 * (a + c), 0.5 * (b + e)), 0.5 * (reg_max(p, a, b) + reg_max(p, c, e)) + 1e-13);
    EXPECT_NEAR(reg_max(p, a, b), reg_max(p, b, a), 1e-13);
  }
}

TEST(RegMaxCompose, Examples) {
  const RegMaxParams p{0.5, 0.5};
  PointField zero = [](const CVec&) { return 0.0; };
  PointField rho = [](const CVec& t) { return t.squaredNorm() - 4.0; };
  const PointField composed = reg_max_compose(p, zero, rho);
  EXPECT_NEAR(composed(CVec::Constant(1, 0.5)), 0.0, 1e-14);

  PointField c = [](const CVec&) { return 1.5; };
  const double v = reg_max_compose({0.3, 0.8}, c, c)(CVec::Zero(1));
  EXPECT_GE(v, 1.5);
  EXPECT_LE(v, 1.5 + 0.8);
}

TEST(RegMaxCompose, PshInputsGivePshOutput) {
  PointField u1 = [](const CVec& t) { return t.squaredNorm(); };
  PointField u2 = [](const CVec& t) { return (t(0) * t(0)).real() + 0.2; };
  const PointField composed = reg_max_compose({0.4, 0.4}, u1, u2);
  ParamGrid g;
  g.box = ParamBox::square(1, 1.0);
  g.resolution = 7;
  const MarginResult r = strict_psh_margin(composed, g, {1e-2, true});
  EXPECT_GE(r.margin, -10.0 * r.error_estimate - 1e-6);
}

TEST(StrictPshMargin, Examples) {
  PointField two = [](const CVec& t) { return 2.0 * t.squaredNorm(); };
  PointField hartogs = [](const CVec& t) { return 4.0 * t.squaredNorm() + std::log(2.0 / kPi); };
  PointField harmonic = [](const CVec& t) { return (t(0) * t(0)).real(); };
  EXPECT_NEAR(strict_psh_margin(two, grid3(), {1e-2, true}).margin, 2.0, 1e-9);
  EXPECT_NEAR(strict_psh_margin(hartogs, grid3(), {1e-2, true}).margin, 4.0, 1e-9);
  EXPECT_NEAR(strict_psh_margin(harmonic, grid3(), {1e-2, true}).margin, 0.0, 1e-9);
}

TEST(StrictPshMargin, ReportsArgmin) {
  PointField f = [](const CVec& t) { return t.squaredNorm() + std::pow(t.squaredNorm(), 2); };
  const MarginResult r = strict_psh_margin(f, grid3(), {1e-2, true});
  EXPECT_NEAR(r.margin, 1.0, 1e-8);
  EXPECT_NEAR(r.argmin.norm(), 0.0, 1e-15);
}

TEST(StrictConvexMargin, Examples) {
  RealGrid g;
  g.box = {{-0.5, 0.5}};
  g.resolution = 5;
  RealField sq = [](const RVec& x) { return x(0) * x(0); };
  RealField affine = [](const RVec& x) { return 3.0 * x(0) + 1.0; };
  RealField neglog = [](const RVec& x) { return -0.5 * std::log(1.0 - x(0) * x(0)); };
  EXPECT_NEAR(strict_convex_margin(sq, g, {1e-2, true}).margin, 2.0, 1e-9);
  EXPECT_NEAR(strict_convex_margin(affine, g, {1e-2, true}).margin, 0.0, 1e-9);
  const MarginResult r = strict_convex_margin(neglog, std::vector<RVec>{RVec::Zero(1)}, {1e-2, true});
  EXPECT_NEAR(r.margin, 1.0, 1e-6);
  // f''(t) = (1 + t²)/(1 − t²)² is smallest at t = 0.
  EXPECT_NEAR(strict_convex_margin(neglog, g, {1e-2, true}).margin, 1.0, 1e-6);
}
