#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finsler/characterize.hpp"
#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/unicorn.hpp"

using namespace finsler;

namespace {

GridSpec small_grid() {
  GridSpec g;
  g.x0.count = g.r.count = g.s_fraction.count = g.z.count = 3;
  return g;
}

}  // namespace

TEST(Unicorn, CanonicalAlphaBetaText) {
  const auto p = UnicornParams::from_alpha_beta("1", "1", "1");
  const MetricSpec spec = build_unicorn(p);
  for (double z : {-1.5, 0.1, 0.7, 3.0}) {
    const double expect = std::sqrt((z + 1) * (z + 1) + 1) * std::exp(std::atan(z + 1));
    EXPECT_NEAR(spec.phi_at({0.3, 0.5, 0.0, z}), expect, 1e-13);
  }
  EXPECT_TRUE(spec.s_independent());
}

TEST(Unicorn, GAndAlphaBetaModesAgree) {
  const auto g = UnicornParams::derived_instance();
  const auto ab = UnicornParams::from_alpha_beta("exp(x0)", "exp(-r)/sqrt(2)", "1");
  const MetricSpec a = build_unicorn(g), b = build_unicorn(ab);
  for (const auto& pt : small_grid().points()) EXPECT_NEAR(a.phi_at(pt), b.phi_at(pt), 1e-12);
}

TEST(Unicorn, Errors) {
  EXPECT_THROW(build_unicorn(UnicornParams::from_g("1", "1", "1", "0.5")), NegativeDelta);
  EXPECT_THROW(build_unicorn(UnicornParams::from_g("1", "1", "0", "1")), ZeroG2);
  EXPECT_THROW(build_unicorn(UnicornParams::from_alpha_beta("1", "-1", "1")), DegenerateAlphaBeta);
  EXPECT_THROW(UnicornParams::from_g("1", "z", "1", "2"), InvalidFamilyParameter);
  EXPECT_THROW(regularity_probe(UnicornParams::from_alpha_beta("1", "0", "1"), 0.0, 0.5), DegenerateAlphaBeta);
  EXPECT_EQ(unicorn_variant_from_string("intro-form"), UnicornVariant::Intro);
  EXPECT_THROW(unicorn_variant_from_string("other"), InvalidFamilyParameter);
}

TEST(Unicorn, IntroFormIsValidOnDefaultGrid) {
  const auto spec = build_unicorn(UnicornParams::derived_instance("exp(x0)", UnicornVariant::Intro));
  EXPECT_TRUE(validate(spec, GridSpec{}).pass());
}

TEST(UnicornConditions, DerivedInstance) {
  const GridSpec grid;
  const auto c = check_conditions(UnicornParams::derived_instance(), grid);
  EXPECT_LE(c.residuals.entries[UnicornConditions::kBetaR].max_residual, 1e-12);
  EXPECT_LE(c.residuals.entries[UnicornConditions::kRatioR].max_residual, 1e-12);
  EXPECT_LE(c.residuals.entries[UnicornConditions::kKR].max_residual, 1e-12);
  EXPECT_LE(c.residuals.entries[UnicornConditions::kBetaX0].max_residual, 1e-12);
  // [g3/g2] = sqrt(2) e^{-r} and k'/k = 1, so the residual is 2 sqrt(2) e^{-r}
  const auto& b = c.residuals.entries[UnicornConditions::kBerwaldK];
  EXPECT_NEAR(b.max_residual, 2.0 * std::numbers::sqrt2 * std::exp(-grid.r.min), 1e-12);
  EXPECT_NEAR(b.argmax.r, grid.r.min, 1e-15);
  EXPECT_NEAR(c.residuals.entries[UnicornConditions::kBerwaldKFactorOne].max_residual,
              std::numbers::sqrt2 * std::exp(-grid.r.min), 1e-12);
  EXPECT_NEAR(c.min_delta, std::exp(2 * grid.r.min) / 2, 1e-12);
}

TEST(UnicornConditions, ConstantCoefficients) {
  const auto c = check_conditions(UnicornParams::from_g("2", "1.5", "0.5", "3"));
  EXPECT_EQ(c.landsberg_max(), 0.0);
  EXPECT_EQ(c.berwald_max(), 0.0);
  EXPECT_EQ(c.berwald_factor_one_max(), 0.0);
}

TEST(UnicornConditions, NonConstantG2InR) {
  const auto c = check_conditions(UnicornParams::from_g("1", "1", "r", "2"));
  EXPECT_GT(c.residuals.entries[UnicornConditions::kBetaR].max_residual, 1e-3);
  EXPECT_GT(c.landsberg_max(), 1e-3);
}

TEST(UnicornCurvature, DerivedInstanceIsLandsbergNotBerwald) {
  const auto spec = build_unicorn(UnicornParams::derived_instance());
  const auto sweep = curvature_sweep(spec, GridSpec{}, false);
  EXPECT_LE(sweep.landsberg_max, 1e-7);
  EXPECT_GE(sweep.berwald_max, 1e-3);
  EXPECT_EQ(classify(spec, small_grid()).verdict, Verdict::LandsbergNotBerwald);
}

TEST(UnicornCurvature, ConstantKIsBerwald) {
  const auto spec = build_unicorn(UnicornParams::derived_instance("1"));
  const auto c = classify(spec, small_grid());
  EXPECT_EQ(c.verdict, Verdict::Berwald);
  ASSERT_TRUE(c.sweep);
  EXPECT_LE(c.sweep->berwald_max, 1e-7);
  EXPECT_LE(check_conditions(UnicornParams::derived_instance("1")).berwald_max(), 1e-12);
}

// Landsberg conditions hold and alpha, beta do not depend on x0: the printed
// Berwald residual and the tensor give the same verdict.
TEST(UnicornCurvature, BerwaldResidualTracksTensor) {
  const char* ks[] = {"exp(x0)", "1+0.3*x0^2", "1"};
  for (const char* k : ks) {
    const auto p = UnicornParams::from_alpha_beta(k, "exp(-r)*(1+r^2)", "0.7");
    const auto cond = check_conditions(p, small_grid());
    ASSERT_LE(cond.landsberg_max(), 1e-12) << k;
    const auto sweep = curvature_sweep(build_unicorn(p, small_grid()), small_grid(), false);
    EXPECT_LE(sweep.landsberg_max, 1e-7) << k;
    if (cond.berwald_max() > 1e-3) {
      EXPECT_GT(sweep.berwald_max, 1e-3) << k;
    } else {
      EXPECT_LE(sweep.berwald_max, 1e-7) << k;
    }
  }
}

// k = e^{x0}, alpha = e^{-r-x0}/sqrt(2), beta = 1: k alpha is x0-independent,
// so phi_x0 = z phi_z and the metric is Berwald. The printed k'/k condition
// leaves a residual of 2 alpha; the factor-one form vanishes.
TEST(UnicornCurvature, PrintedBerwaldConditionDisagreesWhenAlphaDependsOnX0) {
  const auto p = UnicornParams::from_alpha_beta("exp(x0)", "exp(-r-x0)/sqrt(2)", "1");
  const GridSpec grid = small_grid();
  const auto cond = check_conditions(p, grid);
  const auto sweep = curvature_sweep(build_unicorn(p, grid), grid, true);
  EXPECT_LE(sweep.berwald_max, 1e-7);
  EXPECT_TRUE(sweep.berwald_oracle_pass);
  EXPECT_NEAR(cond.berwald_max(), std::numbers::sqrt2 * std::exp(-grid.r.min - grid.x0.min), 1e-10);
  EXPECT_LE(cond.berwald_factor_one_max(), 1e-12);
}

TEST(UnicornProbe, AlphaBetaOne) {
  const auto res = regularity_probe(UnicornParams::from_alpha_beta("1", "1", "1"), 0.0, 0.5);
  const double pred = 8.0 * std::exp(std::numbers::pi / 2.0);
  EXPECT_NEAR(res.predicted_plus, -pred, 1e-12);
  EXPECT_NEAR(res.predicted_minus, pred, 1e-12);
  EXPECT_NEAR(res.predicted_jump, -2.0 * pred, 1e-12);
  EXPECT_TRUE(res.matches(1e-3)) << res.theta_ppp_plus << " " << res.theta_ppp_minus;
  EXPECT_LE(res.rel_error_plus(), 1e-3);
  EXPECT_GT(std::fabs(res.jump), 70.0);
  EXPECT_NEAR(res.theta0_direct, std::exp(std::numbers::pi / 2.0), 1e-8);
  EXPECT_NEAR(res.theta0_fd, res.theta0_predicted, 1e-6);
  EXPECT_NEAR(res.theta_p_plus, 0.0, 1e-5);
}

TEST(UnicornProbe, BetaZeroHasNoJump) {
  const auto res = regularity_probe(UnicornParams::from_alpha_beta("2", "0.8", "0"), 0.1, 0.4);
  EXPECT_EQ(res.predicted_jump, 0.0);
  EXPECT_LE(std::fabs(res.jump), 1e-4);
  EXPECT_TRUE(res.matches());
}

TEST(UnicornProbe, DerivedInstanceAcrossNodes) {
  const auto p = UnicornParams::derived_instance();
  for (double x0 : {-1.0, 0.0, 1.0})
    for (double r : {0.2, 0.6, 1.0}) {
      const auto res = regularity_probe(p, x0, r);
      EXPECT_TRUE(res.matches(1e-3)) << x0 << " " << r;
      EXPECT_GT(std::fabs(res.jump), 0.0);
    }
}

TEST(UnicornVariants, DerivedInstance) {
  const auto vc = variant_consistency(UnicornParams::derived_instance(), small_grid());
  ASSERT_TRUE(vc.canonical.landsberg_max);
  EXPECT_LE(*vc.canonical.landsberg_max, 1e-8);
  EXPECT_TRUE(vc.canonical.landsberg_vanishes);
  EXPECT_NEAR(vc.radicand_offset, std::exp(-2 * 0.2), 1e-12);
  ASSERT_TRUE(vc.intro.landsberg_max);
  EXPECT_GT(*vc.intro.landsberg_max, 1e-3);
  EXPECT_EQ(vc.vanishing(), "canonical");
}

TEST(UnicornVariants, ConstantCoefficientsBothVanish) {
  const auto vc = variant_consistency(UnicornParams::from_g("1", "1.5", "0.5", "3"), small_grid());
  ASSERT_TRUE(vc.canonical.landsberg_max && vc.intro.landsberg_max);
  EXPECT_LE(*vc.canonical.landsberg_max, 1e-8);
  EXPECT_LE(*vc.intro.landsberg_max, 1e-8);
  EXPECT_EQ(vc.vanishing(), "both");
}
