#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finsler/error.hpp"
#include "finsler/finite_difference.hpp"
#include "finsler/metric.hpp"

using namespace finsler;

namespace {

const char* kUnicornText =
    "exp(x0)*sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))";

SamplePoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.3, 1.0);
  SamplePoint p;
  p.x0 = unit(rng);
  for (int i = 0; i < n; ++i) {
    p.xbar.push_back(pos(rng) * unit(rng));
    p.ybar.push_back(unit(rng));
  }
  p.y0 = pos(rng) * p.u();
  return p;
}

std::vector<double> spectrum(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST(SamplePoint, ReducedCoordinates) {
  SamplePoint p{0.5, {3.0, 4.0, 0.0}, 2.0, {0.0, 1.0, 0.0}};
  EXPECT_DOUBLE_EQ(p.r(), 5.0);
  EXPECT_DOUBLE_EQ(p.u(), 1.0);
  EXPECT_DOUBLE_EQ(p.s(), 4.0);
  EXPECT_DOUBLE_EQ(p.z(), 2.0);
  SamplePoint c = SamplePoint::canonical(4, {0.1, 0.8, -0.3, 1.2}, 1.7);
  EXPECT_NEAR(c.r(), 0.8, 1e-15);
  EXPECT_NEAR(c.s(), -0.3, 1e-15);
  EXPECT_NEAR(c.z(), 1.2, 1e-15);
  EXPECT_NEAR(c.u(), 1.7, 1e-15);
}

TEST(PhiTable, Euclidean) {
  auto spec = MetricSpec::from_family("euclidean");
  auto t = phi_table(spec, {0.3, 0.6, 0.1, 0.7});
  EXPECT_EQ(t.phi_s(), 0.0);
  EXPECT_EQ(t.partial(0, 1, 0, 0), 0.0);
  EXPECT_EQ(t.partial(1, 0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.phi(), std::sqrt(0.49 + 1.0));
  EXPECT_EQ(t.order(), 6);
}

TEST(PhiTable, Randers) {
  auto spec = MetricSpec::from_family("randers", {{"c", 0.5}});
  auto t = phi_table(spec, {0.0, 0.5, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(t.phi(), 1.0);
  EXPECT_DOUBLE_EQ(t.phi_z(), 0.5);
  EXPECT_DOUBLE_EQ(t.phi_zz(), 1.0);
}

TEST(PhiTable, UnicornMatchesFiniteDifferences) {
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  const ReducedPoint p{0.2, 0.6, 0.1, 0.9};
  auto t = phi_table(spec, p);
  auto f = [&](std::span<const double> v) { return spec.phi_at({v[0], v[1], v[2], v[3]}); };
  const std::vector<double> pt{p.x0, p.r, p.s, p.z};
  JetSpace sp3(reduced_variable_names(), 3);
  for (std::size_t i = 1; i < sp3.size(); ++i) {
    const auto idx = sp3.multi_index_at(i);
    const double exact = t.jet().partial(idx);
    EXPECT_NEAR(fd_partial(f, pt, idx, 1e-2), exact, 1e-5 * std::max(1.0, std::fabs(exact)));
  }
}

TEST(PhiTable, NonPositivePhi) {
  auto spec = MetricSpec::from_text("neg", "z-1");
  EXPECT_THROW(phi_table(spec, {0, 1, 0, 0.5}), NonPositivePhi);
  auto bad = MetricSpec::from_text("bad", "sqrt(z-1)");
  EXPECT_THROW(phi_table(bad, {0, 1, 0, 0.5}), DomainError);
}

TEST(Omega, Examples) {
  auto e = MetricSpec::from_family("euclidean");
  EXPECT_DOUBLE_EQ(omega(phi_table(e, {0, 1, 0, 0})), 1.0);
  EXPECT_NEAR(omega(phi_table(e, {0, 1, 0, 1})), 1.0 / std::sqrt(2.0), 1e-15);
  auto lin = MetricSpec::from_text("lin", "1+0.3*z");
  for (double z : {0.1, 0.7, 2.5}) EXPECT_NEAR(omega(phi_table(lin, {0, 1, 0, z})), 1.0, 1e-15);
}

TEST(Lambda, Examples) {
  auto e = MetricSpec::from_family("euclidean");
  EXPECT_DOUBLE_EQ(lambda_(phi_table(e, {0, 1, 0, 0}), 1.0, 0.0), 1.0);
  auto u = MetricSpec::from_text("unicorn", kUnicornText);
  auto t = phi_table(u, {0.4, 0.5, 0.2, 0.8});
  EXPECT_DOUBLE_EQ(lambda_(t, 0.5, 0.2), omega(t) * t.phi_zz());
  EXPECT_GT(lambda_(t, 0.5, 0.2), 0.0);
}

TEST(Validate, EuclideanPasses) {
  auto rep = validate(MetricSpec::from_family("euclidean"), GridSpec{});
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.points, 625u);
  EXPECT_GT(rep.min_lambda, 0.0);
  EXPECT_GT(rep.min_omega, 0.0);
  EXPECT_EQ(rep.disagreements, 0u);
}

TEST(Validate, StrongRandersFails) {
  GridSpec g;
  g.z = {-2.0, 2.0, 9};
  auto rep = validate(MetricSpec::from_text("randers-1.5", "sqrt(z^2+1)+1.5*z"), g);
  EXPECT_FALSE(rep.criterion_pass());
  EXPECT_FALSE(rep.oracle_pass());
  EXPECT_EQ(rep.disagreements, 0u);
}

TEST(Validate, UnicornCriterionAgreesWithHessian) {
  GridSpec g;
  g.z = {-2.0, 2.0, 9};
  auto rep = validate(MetricSpec::from_text("unicorn", kUnicornText), g);
  EXPECT_EQ(rep.disagreements, 0u);
  EXPECT_TRUE(rep.pass());
}

TEST(Validate, EmptyGrid) {
  GridSpec g;
  g.r.count = 0;
  EXPECT_THROW(validate(MetricSpec::from_family("euclidean"), g), EmptyGrid);
}

TEST(FundamentalTensor, EuclideanIsIdentity) {
  auto spec = MetricSpec::from_family("euclidean");
  std::mt19937_64 rng(3);
  auto g = fundamental_tensor(spec, random_point(3, rng));
  EXPECT_LT((g - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FundamentalTensor, EulerHomogeneityAndSymmetry) {
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    SamplePoint p = random_point(3, rng);
    auto g = fundamental_tensor(spec, p);
    Eigen::VectorXd y(4);
    y << p.y0, p.ybar[0], p.ybar[1], p.ybar[2];
    const double F = spec.finsler_value(p);
    EXPECT_NEAR(y.dot(g * y), F * F, 1e-12 * F * F);
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MetricProperties, RotationInvarianceAndReduction) {
  auto spec = MetricSpec::from_text("unicorn", kUnicornText);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    SamplePoint p = random_point(3, rng);
    Eigen::MatrixXd O = random_orthogonal(3, rng);
    SamplePoint q = p.rotated(O);
    EXPECT_NEAR(spec.finsler_value(p), spec.finsler_value(q), 1e-12);
    auto tp = phi_table(spec, p.reduced(), 2);
    auto tq = phi_table(spec, q.reduced(), 2);
    EXPECT_NEAR(omega(tp), omega(tq), 1e-10);
    EXPECT_NEAR(lambda_(tp, p.r(), p.s()), lambda_(tq, q.r(), q.s()), 1e-10);
    auto sp = spectrum(fundamental_tensor(spec, p));
    auto sq = spectrum(fundamental_tensor(spec, q));
    SamplePoint c = SamplePoint::canonical(3, p.reduced(), p.u());
    auto sc = spectrum(fundamental_tensor(spec, c));
    for (std::size_t i = 0; i < sp.size(); ++i) {
      EXPECT_NEAR(sp[i], sq[i], 1e-10);
      EXPECT_NEAR(sp[i], sc[i], 1e-10);
    }
  }
}

TEST(MetricProperties, PositiveHomogeneity) {
  auto spec = MetricSpec::from_text("dsl", "sqrt(z^2+1+0.2*s^2)+0.1*r*z");
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    SamplePoint p = random_point(4, rng);
    for (double lambda : {0.3, 2.0, 7.5}) {
      const double F = spec.finsler_value(p);
      EXPECT_NEAR(spec.finsler_value(p.with_scaled_y(lambda)), lambda * F, 1e-12 * lambda * F);
    }
  }
}

TEST(RandomOrthogonal, IsOrthogonal) {
  std::mt19937_64 rng(1);
  auto O = random_orthogonal(5, rng);
  EXPECT_LT((O.transpose() * O - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);
}
