// SPDX-License-Identifier: Apache-2.0
#include "finsler/psi.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

const std::vector<std::string>& sz_variable_names() {
  static const std::vector<std::string> names{"s", "z"};
  return names;
}

JetSpace PsiCalculus::space(int order) const { return JetSpace(sz_variable_names(), order); }

Jet PsiCalculus::s_jet(int order) const { return Jet::variable(space(order), 0, s0_); }

Jet PsiCalculus::z_jet(int order) const { return Jet::variable(space(order), 1, z0_); }

Jet PsiCalculus::z_pow(int k, int order) const {
  if (k < 0 && z0_ == 0.0) throw ZDivision("negative power of z at z = 0");
  return pow(z_jet(order), k);
}

Jet PsiCalculus::psi(const Jet& t) const {
  if (t.order() < 1) throw OrderExceeded("Psi needs a jet of order >= 1");
  const int o = t.order() - 1;
  return -(s_jet(o) * d_s(t)) - z_jet(o) * d_z(t);
}

// ---------------------------------------------------------------------------

ThetaField::ThetaField(Expression expr, ParameterEnv params, double x0, double r)
    : expr_(std::move(expr)), params_(std::move(params)), x0_(x0), r_(r) {}

Jet ThetaField::jet(double s, double z, int order) const {
  JetSpace sp(sz_variable_names(), order);
  return eval_jet(expr_, {Jet::constant(sp, x0_), Jet::constant(sp, r_), Jet::variable(sp, 0, s), Jet::variable(sp, 1, z)},
                  params_);
}

double ThetaField::value(double s, double z) const { return evaluate(expr_, {x0_, r_, s, z}, params_); }

double psi(const ThetaField& theta, double s, double z) {
  PsiCalculus pc(s, z);
  return pc.psi(theta.jet(s, z, 1)).value();
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : identities) m = std::max(m, r.max_residual);
  return m;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& scalar_identity_names() {
  static const std::vector<std::string> names{
      "Psi(z^2 Psi(T/z^2)) = -s z Psi(T_s/z) - z^2 Psi(T_z/z)",
      "Psi(z^2 Psi(T/z))/z = -s Psi(T_s) - z Psi(T_z) - z Psi(T/z)",
      "Psi(z^2 Psi(T))/z^2 = -3 Psi(T) - s Psi(T_s) - z Psi(T_z)",
      "Psi(T_z) = Psi_z(T) + T_z",
      "z Psi_z(T) = Psi(z T_z)",
      "z Psi_s(T/z) = Psi(T_s)",
      "(z Psi(T/z))_z = Psi(T_z)",
      "Psi(z^2 Psi(z^2 Psi(T/z^2)))/z^2 = -2 Psi(z^2 Psi(T/z^2)) - (s/z) Psi(z^2 Psi(T_s/z)) - Psi(z^2 Psi(T_z/z))",
      "Psi(z^2 Psi(z^2 Psi(T/z)))/z^2 = -3 Psi(z^2 Psi(T/z)) - (s/z) Psi(z^2 Psi(T_s)) - Psi(z^2 Psi(T_z))",
  };
  return names;
}

const std::vector<std::string>& vector_identity_names() {
  static const std::vector<std::string> names{
      "dT/dy0 = T_z/u",
      "u dT/dy^l = T_s x^l + Psi(T) u_l",
      "u d(T u_l)/dy^k = T d_kl + T_s x^k u_l + Psi(zT)/z u_k u_l",
      "u d(T u_k u_l)/dy^j = T (d_jk u_l)_kl + T_s x^j u_k u_l + Psi(z^2 T)/z^2 u_j u_k u_l",
      "u d(T u_k u_l u_i)/dy^j = T (d_jk u_l u_i)_kli + T_s x^j u_k u_l u_i + Psi(z^3 T)/z^3 u_j u_k u_l u_i",
  };
  return names;
}

std::vector<std::pair<double, double>> scalar_identity_sides(const PsiCalculus& pc, const Jet& t) {
  if (t.order() < 5) throw OrderExceeded("scalar identities need an order >= 5 jet");
  auto P = [&](const Jet& j) { return pc.psi(j); };
  auto Z = [&](int k, const Jet& j) { return pc.zk(k, j); };
  const Jet ts = pc.d_s(t);
  const Jet tz = pc.d_z(t);
  const double s = pc.s();
  const double z = pc.z();
  std::vector<std::pair<double, double>> out;
  out.reserve(kScalarIdentityCount);

  out.emplace_back(P(Z(2, P(Z(-2, t)))).value(), -s * z * P(Z(-1, ts)).value() - z * z * P(Z(-1, tz)).value());
  out.emplace_back(P(Z(2, P(Z(-1, t)))).value() / z,
                   -s * P(ts).value() - z * P(tz).value() - z * P(Z(-1, t)).value());
  out.emplace_back(P(Z(2, P(t))).value() / (z * z), -3.0 * P(t).value() - s * P(ts).value() - z * P(tz).value());
  out.emplace_back(P(tz).value(), pc.psi_z(t).value() + tz.value());
  out.emplace_back(z * pc.psi_z(t).value(), P(Z(1, tz)).value());
  out.emplace_back(z * pc.psi_s(Z(-1, t)).value(), P(ts).value());
  out.emplace_back(pc.d_z(Z(1, P(Z(-1, t)))).value(), P(tz).value());
  out.emplace_back(P(Z(2, P(Z(2, P(Z(-2, t)))))).value() / (z * z),
                   -2.0 * P(Z(2, P(Z(-2, t)))).value() - (s / z) * P(Z(2, P(Z(-1, ts)))).value() -
                       P(Z(2, P(Z(-1, tz)))).value());
  out.emplace_back(P(Z(2, P(Z(2, P(Z(-1, t)))))).value() / (z * z),
                   -3.0 * P(Z(2, P(Z(-1, t)))).value() - (s / z) * P(Z(2, P(ts))).value() -
                       P(Z(2, P(tz))).value());
  return out;
}

IdentityReport verify_identities(const ThetaField& theta, const SzGrid& grid) {
  std::vector<std::pair<double, double>> pts;
  for (double s : grid.s.values()) {
    for (double z : grid.z.values()) {
      if (z != 0.0) pts.emplace_back(s, z);
    }
  }
  if (pts.empty()) throw EmptyGrid("identity grid has no point with z != 0");
  const auto sides = parallel_map<std::vector<std::pair<double, double>>>(pts.size(), [&](std::size_t i) {
    const auto [s, z] = pts[i];
    PsiCalculus pc(s, z);
    return scalar_identity_sides(pc, theta.jet(s, z, 5));
  });
  IdentityReport rep;
  rep.points = pts.size();
  for (int k = 0; k < kScalarIdentityCount; ++k) {
    IdentityResidual r{scalar_identity_names()[static_cast<std::size_t>(k)], 0.0, 0.0};
    for (const auto& side : sides) {
      const auto [lhs, rhs] = side[static_cast<std::size_t>(k)];
      r.max_residual = std::max(r.max_residual, std::fabs(lhs - rhs));
      r.max_lhs = std::max(r.max_lhs, std::fabs(lhs));
    }
    rep.identities.push_back(r);
  }
  return rep;
}

// ---------------------------------------------------------------------------

IdentityReport verify_vector_identities(const Expression& theta, const ParameterEnv& params, const SamplePoint& p) {
  const int n = p.n();
  if (n < 3) throw Error("vector identities need n >= 3");
  const ReducedPoint rp = p.reduced();
  if (rp.z == 0.0) throw ZDivision("vector identities divide by z");

  // left sides
  const RawJets raw = y_jets(p, 1);
  const ReducedJets red = reduce(raw);
  const Jet T = eval_jet(theta, red.coords, params);
  const double u = p.u();
  std::vector<Jet> ul;
  for (int i = 0; i < n; ++i) ul.push_back(raw.ybar[static_cast<std::size_t>(i)] / red.u);
  const int dim = n + 1;
  auto dy = [&](const Jet& j, int var) {
    MultiIndex idx(static_cast<std::size_t>(dim), 0);
    idx[static_cast<std::size_t>(var)] = 1;
    return j.partial(idx);
  };

  // right-side ingredients
  PsiCalculus pc(rp.s, rp.z);
  const Jet t = ThetaField(theta, params, rp.x0, rp.r).jet(rp.s, rp.z, 2);
  const double th = t.value();
  const double ts = pc.d_s(t).value();
  const double tz = pc.d_z(t).value();
  const double psi1 = pc.psi(t).value();
  const double psi_z1 = pc.zk(-1, pc.psi(pc.zk(1, t))).value();
  const double psi_z2 = pc.zk(-2, pc.psi(pc.zk(2, t))).value();
  const double psi_z3 = pc.zk(-3, pc.psi(pc.zk(3, t))).value();
  const std::vector<double> x = p.xbar;
  const std::vector<double> uv = p.unit_ybar();
  auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };
  auto U = [&](int i) { return uv[static_cast<std::size_t>(i)]; };

  IdentityReport rep;
  rep.points = 1;
  auto record = [&](int which, double lhs, double rhs) {
    auto& r = rep.identities[static_cast<std::size_t>(which)];
    r.max_residual = std::max(r.max_residual, std::fabs(lhs - rhs));
    r.max_lhs = std::max(r.max_lhs, std::fabs(lhs));
  };
  for (const auto& name : vector_identity_names()) rep.identities.push_back({name, 0.0, 0.0});

  record(0, dy(T, 0), tz / u);
  for (int l = 0; l < n; ++l) record(1, u * dy(T, l + 1), ts * X(l) + psi1 * U(l));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      record(2, u * dy(T * ul[static_cast<std::size_t>(l)], k + 1),
             th * kronecker(k, l) + ts * X(k) * U(l) + psi_z1 * U(k) * U(l));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const Jet prod = T * ul[static_cast<std::size_t>(k)] * ul[static_cast<std::size_t>(l)];
        const double rot = cyclic([&](int a, int b) { return kronecker(j, a) * U(b); }, k, l);
        record(3, u * dy(prod, j + 1), th * rot + ts * X(j) * U(k) * U(l) + psi_z2 * U(j) * U(k) * U(l));
        for (int i = 0; i < n; ++i) {
          const Jet prod3 = prod * ul[static_cast<std::size_t>(i)];
          const double rot3 = cyclic([&](int a, int b, int c) { return kronecker(j, a) * U(b) * U(c); }, k, l, i);
          record(4, u * dy(prod3, j + 1),
                 th * rot3 + ts * X(j) * U(k) * U(l) * U(i) + psi_z3 * U(j) * U(k) * U(l) * U(i));
        }
      }
    }
  }
  return rep;
}

}  // namespace finsler
