#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finsler/error.hpp"
#include "finsler/psi.hpp"

using namespace finsler;

namespace {

ThetaField theta(const std::string& text) { return ThetaField(parse(text)); }

const char* kUnicornText =
    "exp(x0)*sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)"
    "*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))";

}  // namespace

TEST(Psi, Examples) {
  EXPECT_EQ(psi(theta("3.5"), 0.4, 1.2), 0.0);
  EXPECT_DOUBLE_EQ(psi(theta("s*z"), 1.0, 1.0), -2.0);
  // Euler: s^a z^b has degree a+b
  const double s = 0.7, z = 1.3;
  const double v = std::pow(s, 2) * std::pow(z, 3);
  EXPECT_NEAR(psi(theta("s^2*z^3"), s, z), -5.0 * v, 1e-14);
  EXPECT_NEAR(psi(theta("z^-1"), s, z), 1.0 / z, 1e-15);
}

TEST(Psi, Linearity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = d(rng), b = d(rng), s = d(rng), z = std::fabs(d(rng)) + 0.1;
    ThetaField t1 = theta("exp(s)*arctan(z)");
    ThetaField t2 = theta("sin(s*z)+z^3");
    Expression combo = Expression::literal(a) * t1.expression() + Expression::literal(b) * t2.expression();
    EXPECT_NEAR(psi(ThetaField(combo), s, z), a * psi(t1, s, z) + b * psi(t2, s, z), 1e-12);
  }
}

TEST(Psi, EulerForHomogeneous) {
  // degree 1.5 jointly in (s, z)
  ThetaField t = theta("(s^2+z^2)^0.75");
  for (double s : {-0.5, 0.2}) {
    for (double z : {0.3, 1.7}) EXPECT_NEAR(psi(t, s, z), -1.5 * t.value(s, z), 1e-13);
  }
}

TEST(PsiIdentities, PolynomialExact) {
  auto rep = verify_identities(theta("s^2*z"), SzGrid{});
  ASSERT_EQ(rep.identities.size(), 9u);
  for (const auto& r : rep.identities) EXPECT_LE(r.max_residual, 1e-12) << r.name;
}

TEST(PsiIdentities, Transcendental) {
  auto rep = verify_identities(theta("exp(s)*arctan(z)"), SzGrid{});
  for (const auto& r : rep.identities) EXPECT_LE(r.max_residual, 1e-10) << r.name;
}

TEST(PsiIdentities, ConstantTheta) {
  // For T = 1 the sides vanish except in the second identity (both -1) and
  // the ninth (both 3z, max 6 on z in [0.1, 2]).
  auto rep = verify_identities(theta("1"), SzGrid{});
  for (std::size_t k = 0; k < rep.identities.size(); ++k) {
    const auto& r = rep.identities[k];
    EXPECT_LE(r.max_residual, 1e-13) << r.name;
    const double expected = k == 1 ? 1.0 : (k == 8 ? 6.0 : 0.0);
    EXPECT_NEAR(r.max_lhs, expected, 1e-13) << r.name;
  }
}

TEST(PsiIdentities, SkipsZeroZ) {
  SzGrid g;
  g.z = {0.0, 0.0, 1};
  EXPECT_THROW(verify_identities(theta("s"), g), EmptyGrid);
}

TEST(VectorIdentities, SimpleThetas) {
  SamplePoint p{0.1, {0.4, -0.3, 0.2}, 0.9, {0.5, 0.6, -0.7}};
  auto rz = verify_vector_identities(parse("z"), {}, p);
  EXPECT_LE(rz.identities[0].max_residual, 1e-15);
  auto rs = verify_vector_identities(parse("s"), {}, p);
  EXPECT_LE(rs.identities[1].max_residual, 1e-14);
  for (const auto& r : rs.identities) EXPECT_LE(r.max_residual, 1e-13) << r.name;
}

TEST(VectorIdentities, UnicornPhi) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    SamplePoint p;
    p.x0 = d(rng);
    for (int i = 0; i < 4; ++i) {
      p.xbar.push_back(d(rng));
      p.ybar.push_back(d(rng));
    }
    p.y0 = 0.2 + std::fabs(d(rng));
    auto rep = verify_vector_identities(parse(kUnicornText), {}, p);
    ASSERT_EQ(rep.identities.size(), 5u);
    for (const auto& r : rep.identities) EXPECT_LE(r.max_residual, 1e-9) << r.name;
  }
}

TEST(Cyclic, Rotations) {
  auto f = [](int a, int b, int c) { return 100.0 * a + 10.0 * b + c; };
  EXPECT_EQ(cyclic(f, 1, 2, 3), 123.0 + 231.0 + 312.0);
  auto g = [](int a, int b) { return 10.0 * a + b; };
  EXPECT_EQ(cyclic(g, 1, 2), 12.0 + 21.0);
}
