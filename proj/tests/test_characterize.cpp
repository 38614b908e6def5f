#include <gtest/gtest.h>

#include <cmath>

#include "finsler/characterize.hpp"
#include "finsler/error.hpp"

using namespace finsler;

namespace {

const char* kUnicornText =
    "exp(x0)*sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))";
const char* kBerwaldUnicornText =
    "sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))";

// k = e^{x0} with alpha = e^{-r-x0}/sqrt(2): phi_x0 = z phi_z (Berwald, g2 = k'/k = 1)
const char* kBerwaldScaledText =
    "exp(x0)*sqrt((z+exp(-r-x0)/sqrt(2))^2+(exp(-r-x0)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r-x0)/sqrt(2))/(exp(-r-x0)/sqrt(2))))";

GridSpec small_grid() {
  GridSpec g;
  g.x0.count = g.r.count = g.s_fraction.count = g.z.count = 3;
  return g;
}

}  // namespace

TEST(BerwaldPsiResiduals, EuclideanIsZero) {
  const auto rep = berwald_psi_residuals(MetricSpec::from_family("euclidean"), small_grid());
  ASSERT_EQ(rep.entries.size(), 8u);
  EXPECT_EQ(rep.points, 81u);
  for (const auto& e : rep.entries) EXPECT_EQ(e.max_residual, 0.0) << e.name;
}

TEST(BerwaldPsiResiduals, SeparateUnicornVariants) {
  const auto g = small_grid();
  EXPECT_GT(berwald_psi_residuals(MetricSpec::from_text("u", kUnicornText), g).max_residual(), 1e-3);
  EXPECT_LE(berwald_psi_residuals(MetricSpec::from_text("b", kBerwaldUnicornText), g).max_residual(), 1e-8);
  EXPECT_LE(berwald_psi_residuals(MetricSpec::from_text("b2", kBerwaldScaledText), g).max_residual(), 1e-8);
}

TEST(BerwaldPsiResiduals, NeedsThreeDimensions) {
  EXPECT_THROW(berwald_psi_residuals(MetricSpec::from_family("euclidean").with_dimension(2), small_grid()), Error);
}

TEST(BerwaldPolyFit, Euclidean) {
  const auto fit = berwald_poly_fit(MetricSpec::from_family("euclidean"), small_grid());
  EXPECT_EQ(fit.f.size(), 9u);
  EXPECT_LE(fit.max_residual(), 1e-10);
  for (const auto& row : fit.f)
    for (double v : row.values) EXPECT_LE(std::fabs(v), 1e-10);
}

TEST(BerwaldPolyFit, BerwaldUnicornRecoversG1) {
  const auto spec = MetricSpec::from_text("b", kBerwaldUnicornText);
  const auto fit = berwald_poly_fit(spec, small_grid());
  EXPECT_LE(fit.max_residual(), 1e-8);
  for (const auto& row : fit.f) {
    // U is constant in (s, z), so the constant coefficient f4 carries g1
    const auto t = phi_table(spec, {row.x0, row.r, 0.0, 1.0}, 1);
    const double g1 = -t.partial(0, 1, 0, 0) / (2.0 * row.r * (t.phi() - t.phi_z()));
    EXPECT_NEAR(row.values[3], g1, 1e-8);
    EXPECT_NEAR(row.values[0], 0.0, 1e-8);
    EXPECT_NEAR(row.values[2], 0.0, 1e-8);
  }
}

TEST(BerwaldPolyFit, NonLandsbergMisses) {
  EXPECT_GT(berwald_poly_fit(MetricSpec::from_text("x", "sqrt(z^2+1)+0.1*r*z"), small_grid()).max_residual(), 1e-4);
}

TEST(BerwaldPolyFit, TooFewSamples) {
  GridSpec g = small_grid();
  g.s_fraction.count = 1;
  g.z.count = 2;
  EXPECT_THROW(berwald_poly_fit(MetricSpec::from_family("euclidean"), g), RankDeficientFit);
}

TEST(SIndependentBerwald, Euclidean) {
  const auto out = s_independent_berwald_check(MetricSpec::from_family("euclidean"), small_grid());
  EXPECT_EQ(out.residuals.max_residual(), 0.0);
  for (const auto& row : out.g) {
    EXPECT_EQ(row.values[0], 0.0);
    EXPECT_EQ(row.values[1], 0.0);
  }
}

TEST(SIndependentBerwald, ScaledBerwaldUnicornHasG2EqualKPrimeOverK) {
  const auto out = s_independent_berwald_check(MetricSpec::from_text("b2", kBerwaldScaledText), small_grid());
  EXPECT_LE(out.residuals.max_residual(), 1e-8);
  for (const auto& row : out.g) EXPECT_NEAR(row.values[1], 1.0, 1e-10);
}

TEST(SIndependentBerwald, NonBerwaldUnicornFails) {
  EXPECT_GT(s_independent_berwald_check(MetricSpec::from_text("u", kUnicornText), small_grid()).residuals.max_residual(),
            1e-3);
}

TEST(SIndependentBerwald, RejectsSDependence) {
  EXPECT_THROW(s_independent_berwald_check(MetricSpec::from_text("s", "sqrt(z^2+1+0.2*s^2)"), small_grid()),
               NotSIndependent);
  EXPECT_THROW(landsberg_pde_residuals(MetricSpec::from_text("s", "sqrt(z^2+1+0.2*s^2)"), small_grid()),
               NotSIndependent);
}

TEST(SIndependentBerwald, DegenerateProbe) {
  // phi - z phi_z = 0 at every z for a linear phi
  EXPECT_THROW(s_independent_berwald_check(MetricSpec::from_text("lin", "2*z"), small_grid()), DegenerateDenominator);
}

TEST(LandsbergPde, Paths) {
  const auto g = small_grid();
  EXPECT_EQ(landsberg_pde_residuals(MetricSpec::from_family("euclidean"), g).max_residual(), 0.0);
  const auto u = landsberg_pde_residuals(MetricSpec::from_text("u", kUnicornText), g);
  ASSERT_EQ(u.entries.size(), 4u);
  EXPECT_LE(u.max_residual(), 1e-8);
  EXPECT_GT(landsberg_pde_residuals(MetricSpec::from_text("x", "sqrt(z^2+1)+0.1*r*z"), g).max_residual(), 1e-4);
}

TEST(ThetaProbe, UnicornLimits) {
  const auto spec = MetricSpec::from_text("u", kUnicornText);
  const double x0 = 0.3, r = 0.5;
  const double a = std::exp(-r) / std::sqrt(2.0), b = 1.0, k = std::exp(x0);
  const auto p = theta_probe(spec, x0, r);
  const double pred = a * a * (1 + b * b) * k * std::exp(b * M_PI / 2) * (-4 * a * b);
  EXPECT_NEAR(p.d3_plus / pred, 1.0, 1e-3);
  EXPECT_NEAR(p.d3_minus / -pred, 1.0, 1e-3);
  EXPECT_NEAR(p.theta0_plus, k * std::exp(b * M_PI / 2), 1e-8);
  EXPECT_FALSE(p.smooth());
  EXPECT_TRUE(theta_probe(MetricSpec::from_family("euclidean"), 0.0, 0.5).smooth());
}

TEST(Classify, Verdicts) {
  const auto g = small_grid();
  EXPECT_EQ(classify(MetricSpec::from_family("euclidean"), g).verdict, Verdict::Berwald);
  const auto u = classify(MetricSpec::from_text("u", kUnicornText), g);
  EXPECT_EQ(u.verdict, Verdict::LandsbergNotBerwald);
  EXPECT_TRUE(u.s_independent);
  EXPECT_FALSE(u.regular);
  EXPECT_FALSE(u.anomaly);
  EXPECT_EQ(classify(MetricSpec::from_text("b", kBerwaldUnicornText), g).verdict, Verdict::Berwald);
  EXPECT_EQ(classify(MetricSpec::from_text("x", "sqrt(z^2+1)+0.1*r*z"), g).verdict, Verdict::NonLandsberg);
  GridSpec wide = g;
  wide.z = {-2.0, 2.0, 5};
  EXPECT_EQ(classify(MetricSpec::from_text("r15", "sqrt(z^2+1)+1.5*z"), wide).verdict, Verdict::InvalidMetric);
}

TEST(Classify, VerdictNames) {
  EXPECT_EQ(to_string(Verdict::InvalidMetric), "INVALID_METRIC");
  EXPECT_EQ(to_string(Verdict::LandsbergNotBerwald), "LANDSBERG_NOT_BERWALD");
}

TEST(Concordance, AllPathsAgree) {
  const auto g = small_grid();
  for (const auto& spec :
       {MetricSpec::from_family("euclidean"), MetricSpec::from_family("randers", {{"c", 0.4}}),
        MetricSpec::from_family("unicorn", {{"alpha", 1.0}, {"beta", 1.0}}), MetricSpec::from_text("u", kUnicornText),
        MetricSpec::from_text("b", kBerwaldUnicornText), MetricSpec::from_text("b2", kBerwaldScaledText),
        MetricSpec::from_text("x", "sqrt(z^2+1)+0.1*r*z"),
        MetricSpec::from_text("dsl-s", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s")}) {
    const auto c = concordance(spec, g);
    EXPECT_TRUE(c.agree()) << spec.name();
  }
}
