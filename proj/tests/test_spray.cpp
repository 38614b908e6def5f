#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finsler/error.hpp"
#include "finsler/spray.hpp"

using namespace finsler;

namespace {

const char* kUnicornText =
    "exp(x0)*sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))";

SamplePoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rr(0.2, 1.0), frac(-0.9, 0.9), zz(0.1, 2.0), uu(0.5, 2.0);
  const double r = rr(rng);
  const ReducedPoint rp{unit(rng), r, frac(rng) * r, zz(rng)};
  return SamplePoint::canonical(n, rp, uu(rng)).rotated(random_orthogonal(n, rng));
}

}  // namespace

TEST(SprayQuantities, EuclideanVanishes) {
  auto spec = MetricSpec::from_family("euclidean");
  auto q = spray_quantities(phi_table(spec, {0.1, 0.5, 0.2, 0.7}), true);
  EXPECT_EQ(q.U, 0.0);
  EXPECT_EQ(q.L, 0.0);
  EXPECT_EQ(q.W, 0.0);
  EXPECT_EQ(q.N, 0.0);
}

TEST(SprayQuantities, CorollaryAgreesForSIndependent) {
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  ASSERT_TRUE(spec.s_independent());
  for (const auto& p : GridSpec{}.points()) {
    const auto t = phi_table(spec, p, 2);
    auto q = spray_quantities(t, true);
    ASSERT_TRUE(q.corollary_deviation.has_value());
    EXPECT_LE(*q.corollary_deviation, kCorollaryTolerance);
    const double u_short = -t.partial(0, 1, 0, 0) / (2 * p.r * (t.phi() - p.z * t.phi_z()));
    EXPECT_NEAR(q.U, u_short, 1e-12 * std::max(1.0, std::fabs(u_short)));
    EXPECT_NEAR(q.N - p.z * (q.W + p.s * q.U) - q.L, 0.0, 1e-12);
  }
}

TEST(SprayQuantities, ShortcutSignOfPhiR) {
  // With a minus sign on the s phi_r / (2r) term, W no longer matches the
  // raw-coordinate oracle; the plus sign does.
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  const ReducedPoint rp{0.2, 0.6, 0.3, 0.8};
  const auto t = phi_table(spec, rp, 2);
  const auto d = phi_partials(t);
  const auto c = spray_terms_s_independent(d, rp.r, rp.s, rp.z);
  const double w_minus = c.W - rp.s * d.r / (rp.r * d.phi);
  auto oracle = spray_oracle(spec, SamplePoint::canonical(3, rp)).G;
  // canonical point with u = 1: G^2 = W u_2 since x^2 = 0
  const double u2 = std::sqrt(rp.r * rp.r - rp.s * rp.s) / rp.r;
  EXPECT_NEAR(c.W * u2, oracle[2], 1e-10);
  EXPECT_GT(std::fabs(w_minus * u2 - oracle[2]), 1e-3);
}

TEST(SprayQuantities, SingularCases) {
  // phi = 1 + z: Omega = 1 but phi_zz = 0, so Lambda = 0
  auto lin = MetricSpec::from_text("lin", "1+z+0.1*r*z");
  EXPECT_THROW(spray_quantities(phi_table(lin, {0, 0.5, 0.1, 0.5})), SingularLambda);
  PhiPartials<double> d{1.0, 0, 1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_THROW(spray_terms_s_independent(d, 1.0, 0.0, 1.0), SingularOmega);
  d.z = 0.5;
  EXPECT_THROW(spray_terms_s_independent(d, 1.0, 0.0, 1.0), SingularPhiZZ);
}

TEST(Spray, EuclideanAndRandersVanish) {
  std::mt19937_64 rng(4);
  for (const auto& spec : {MetricSpec::from_family("euclidean"), MetricSpec::from_family("randers", {{"c", 0.5}})}) {
    SamplePoint p = random_point(3, rng);
    for (double g : spray(spec, p).G) EXPECT_NEAR(g, 0.0, 1e-14);
    for (double g : spray_oracle(spec, p).G) EXPECT_NEAR(g, 0.0, 1e-13);
  }
}

TEST(Spray, Homogeneity) {
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    SamplePoint p = random_point(3, rng);
    auto a = spray(spec, p).G;
    auto b = spray(spec, p.with_scaled_y(2.0)).G;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 4.0 * a[i], 1e-10 * std::max(1.0, std::fabs(b[i])));
  }
}

TEST(Spray, RotationEquivariance) {
  auto spec = MetricSpec::from_text("dsl", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s");
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    SamplePoint p = random_point(3, rng);
    Eigen::MatrixXd O = random_orthogonal(3, rng);
    auto a = spray(spec, p).G;
    auto b = spray(spec, p.rotated(O)).G;
    EXPECT_NEAR(a[0], b[0], 1e-12);
    Eigen::Vector3d gi(a[1], a[2], a[3]);
    Eigen::Vector3d rotated = O * gi;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(rotated[i], b[static_cast<std::size_t>(i) + 1], 1e-12);
  }
}

TEST(Spray, ClosedFormMatchesOracle) {
  std::mt19937_64 rng(99);
  const std::vector<MetricSpec> specs{
      MetricSpec::from_text("unicorn", kUnicornText),
      MetricSpec::from_text("dsl-s", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s"),
      MetricSpec::from_text("dsl-x0", "exp(0.2*x0)*sqrt(z^2+1+0.1*r^2*s^2)+0.05*r*s"),
      MetricSpec::from_text("dsl-4", "sqrt(z^2+1+0.2*s^2)+0.1*r*z", {}, 4),
  };
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 20; ++trial) {
      SamplePoint p = random_point(spec.n(), rng);
      auto a = spray(spec, p).G;
      auto b = spray_oracle(spec, p).G;
      auto agree = compare(a, b);
      EXPECT_TRUE(agree.pass) << spec.name() << " diff " << agree.max_abs_diff << " tol " << agree.tolerance;
    }
  }
}

TEST(SprayJets, ValuesMatchPointwiseQuantities) {
  auto spec = MetricSpec::from_text("dsl-s", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s");
  const ReducedPoint p{0.3, 0.7, 0.2, 0.9};
  auto sj = spray_jets(spec, p);
  auto q = spray_quantities(phi_table(spec, p));
  EXPECT_EQ(sj.N.order(), 4);
  EXPECT_NEAR(sj.N.value(), q.N, 1e-14);
  EXPECT_NEAR(sj.W.value(), q.W, 1e-14);
  EXPECT_NEAR(sj.U.value(), q.U, 1e-14);
  EXPECT_NEAR(sj.L.value(), q.L, 1e-14);
  // d/dz of N against a shifted point
  const double h = 1e-5;
  auto qp = spray_quantities(phi_table(spec, {p.x0, p.r, p.s, p.z + h}));
  auto qm = spray_quantities(phi_table(spec, {p.x0, p.r, p.s, p.z - h}));
  EXPECT_NEAR(sj.N.partial({"z"}), (qp.N - qm.N) / (2 * h), 1e-8);
}
