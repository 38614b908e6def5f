// SPDX-License-Identifier: Apache-2.0
#include "finsler/characterize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"
#include "finsler/finite_difference.hpp"
#include "finsler/parallel.hpp"
#include "finsler/spray.hpp"

namespace finsler {

double ResidualReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_residual);
  return m;
}

double PolyFit::max_residual() const {
  double m = fit_residual;
  for (double v : pde_residual) m = std::max(m, v);
  return m;
}

namespace {

/// Collects per-point residual vectors into a report (max and argmax per
/// entry, ties resolved by the first point in grid order).
ResidualReport reduce_residuals(const std::vector<std::string>& names, const std::vector<ReducedPoint>& pts,
                                const std::vector<std::vector<double>>& values, const std::string& grid) {
  ResidualReport rep;
  rep.points = pts.size();
  rep.grid = grid;
  for (std::size_t k = 0; k < names.size(); ++k) {
    ResidualEntry e{names[k], 0.0, pts.empty() ? ReducedPoint{} : pts.front()};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double v = values[i][k];
      if (v > e.max_residual || std::isnan(v)) {
        e.max_residual = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
        e.argmax = pts[i];
      }
    }
    rep.entries.push_back(e);
  }
  return rep;
}

void require_three_dimensions(const MetricSpec& spec) {
  if (spec.n() < 3) throw Error("characterization needs n >= 3");
}

struct XrNode {
  double x0, r;
};

std::vector<XrNode> xr_nodes(const GridSpec& grid) {
  std::vector<XrNode> out;
  for (double x0 : grid.x0.values())
    for (double r : grid.r.values()) out.push_back({x0, r});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ResidualReport berwald_psi_residuals(const MetricSpec& spec, const GridSpec& grid) {
  require_three_dimensions(spec);
  const auto pts = grid.points();
  static const std::vector<std::string> names{"z Psi(U_s/z)", "z Psi(U_z/z)", "U_zzz", "z Psi(N_s/z)",
                                              "z Psi(N_z/z)", "N_zzz",        "z Psi(W/z)", "W_zz"};
  const auto vals = parallel_map<std::vector<double>>(pts.size(), [&](std::size_t i) {
    const SprayJets sj = spray_jets(spec, pts[i], 5);
    const PsiCalculus& pc = sj.pc;
    const double z = pc.z();
    auto zpsi = [&](const Jet& t) { return std::fabs(z * pc.psi(pc.zk(-1, t)).value()); };
    auto zzz = [&](const Jet& t) { return std::fabs(pc.d_z(pc.d_z(pc.d_z(t))).value()); };
    return std::vector<double>{zpsi(pc.d_s(sj.U)), zpsi(pc.d_z(sj.U)), zzz(sj.U),
                               zpsi(pc.d_s(sj.N)), zpsi(pc.d_z(sj.N)), zzz(sj.N),
                               zpsi(sj.W),         std::fabs(pc.d_z(pc.d_z(sj.W)).value())};
  });
  return reduce_residuals(names, pts, vals, grid.describe());
}

// ---------------------------------------------------------------------------

namespace {

struct Sample {
  ReducedPoint p;
  SprayQuantities q;
  double phi, phi_s, phi_z, phi_ss, phi_sz, phi_zz;
};

struct NodeFit {
  std::vector<double> f;
  double fit_residual = 0.0;
  std::array<double, 3> pde{};
};

Eigen::VectorXd solve_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < A.cols()) throw RankDeficientFit("(s, z) samples do not determine the polynomial ansatz");
  return qr.solve(b);
}

NodeFit fit_node(const MetricSpec& spec, const XrNode& node, const GridSpec& grid) {
  std::vector<Sample> samples;
  for (double frac : grid.s_fraction.values()) {
    for (double z : grid.z.values()) {
      const ReducedPoint p{node.x0, node.r, frac * node.r, z};
      const PhiTable t = phi_table(spec, p, 2);
      samples.push_back({p, spray_quantities(t), t.phi(), t.phi_s(), t.phi_z(), t.phi_ss(), t.phi_sz(), t.phi_zz()});
    }
  }
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd Au(m, 4), Aw(m, 2);
  Eigen::VectorXd bu(m), bw(m), bl(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& smp = samples[static_cast<std::size_t>(i)];
    const double s = smp.p.s, z = smp.p.z;
    Au.row(i) << s * s / 2.0, s * z, z * z / 2.0, 1.0;
    Aw.row(i) << s, z;
    bu(i) = smp.q.U;
    bw(i) = smp.q.W;
  }
  const Eigen::VectorXd fu = solve_ls(Au, bu);
  const Eigen::VectorXd fw = solve_ls(Aw, bw);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& smp = samples[static_cast<std::size_t>(i)];
    const double s = smp.p.s, z = smp.p.z;
    const double cubic = s * z * (fu(0) * s * s / 2.0 + fu(1) * s * z + fu(2) * z * z / 2.0);
    bl(i) = smp.q.L + cubic;
  }
  const Eigen::VectorXd fl = solve_ls(Au, bl);

  NodeFit out;
  out.f = {fu(0), fu(1), fu(2), fu(3), fl(0), fl(1), fl(2), fl(3), fw(0), fw(1)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& smp = samples[static_cast<std::size_t>(i)];
    const double s = smp.p.s, z = smp.p.z, r = smp.p.r;
    const double U = Au.row(i).dot(fu);
    const double W = Aw.row(i).dot(fw);
    const double L = Au.row(i).dot(fl) - s * z * (fu(0) * s * s / 2.0 + fu(1) * s * z + fu(2) * z * z / 2.0);
    out.fit_residual = std::max({out.fit_residual, std::fabs(U - smp.q.U), std::fabs(W - smp.q.W),
                                 std::fabs(L - smp.q.L)});
    const double rs2 = r * r - s * s;
    const double e1 = smp.q.p1 - 2.0 * ((smp.q.omega + rs2 * smp.phi_ss) * U + smp.phi_sz * L);
    const double e2 = smp.q.p2 - 2.0 * (rs2 * smp.phi_sz * U + smp.phi_zz * L);
    const double e3 = smp.q.varphi - 2.0 * (W * smp.phi + (s * smp.phi + rs2 * smp.phi_s) * U + smp.phi_z * L);
    out.pde[0] = std::max(out.pde[0], std::fabs(e1));
    out.pde[1] = std::max(out.pde[1], std::fabs(e2));
    out.pde[2] = std::max(out.pde[2], std::fabs(e3));
  }
  return out;
}

}  // namespace

PolyFit berwald_poly_fit(const MetricSpec& spec, const GridSpec& grid) {
  require_three_dimensions(spec);
  const auto nodes = xr_nodes(grid);
  if (nodes.empty()) throw EmptyGrid("poly fit grid has no (x0, r) node");
  const auto fits = parallel_map<NodeFit>(nodes.size(), [&](std::size_t i) { return fit_node(spec, nodes[i], grid); });
  PolyFit out;
  out.grid = grid.describe();
  out.samples_per_node = static_cast<std::size_t>(grid.s_fraction.count) * static_cast<std::size_t>(grid.z.count);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.f.push_back({nodes[i].x0, nodes[i].r, fits[i].f});
    out.fit_residual = std::max(out.fit_residual, fits[i].fit_residual);
    for (std::size_t k = 0; k < 3; ++k) out.pde_residual[k] = std::max(out.pde_residual[k], fits[i].pde[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

double max_abs_phi_s(const MetricSpec& spec, const GridSpec& grid) {
  const auto pts = grid.points();
  const auto v = parallel_map<double>(pts.size(), [&](std::size_t i) { return std::fabs(phi_table(spec, pts[i], 1).phi_s()); });
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

namespace {

void require_s_independent(const MetricSpec& spec, const GridSpec& grid) {
  const double m = max_abs_phi_s(spec, grid);
  if (!(m <= kSIndependenceTol)) throw NotSIndependent("max |phi_s| on the grid is " + std::to_string(m));
}

}  // namespace

SIndependentBerwald s_independent_berwald_check(const MetricSpec& spec, const GridSpec& grid) {
  require_three_dimensions(spec);
  require_s_independent(spec, grid);
  const auto nodes = xr_nodes(grid);
  const auto zs = grid.z.values();
  const double s_probe = 0.0;

  struct NodeResult {
    double g1, g2;
    std::vector<ReducedPoint> pts;
    std::vector<std::vector<double>> res;
  };
  const auto results = parallel_map<NodeResult>(nodes.size(), [&](std::size_t i) {
    const auto [x0, r] = nodes[i];
    const PhiTable probe = phi_table(spec, {x0, r, s_probe, kProbeZ}, 1);
    const double om = probe.phi() - kProbeZ * probe.phi_z();
    const double zpz = kProbeZ * probe.phi_z();
    if (om == 0.0) throw DegenerateDenominator("phi - z phi_z vanishes at the probe z");
    if (zpz == 0.0) throw DegenerateDenominator("z phi_z vanishes at the probe z");
    NodeResult nr;
    nr.g1 = -probe.partial(0, 1, 0, 0) / (2.0 * r * om);
    nr.g2 = probe.partial(1, 0, 0, 0) / zpz;
    for (double z : zs) {
      if (z == kProbeZ) continue;
      const PhiTable t = phi_table(spec, {x0, r, s_probe, z}, 1);
      const double phi_r = t.partial(0, 1, 0, 0);
      const double phi_x0 = t.partial(1, 0, 0, 0);
      nr.pts.push_back({x0, r, s_probe, z});
      nr.res.push_back({std::fabs(-phi_r / r - 2.0 * (t.phi() - z * t.phi_z()) * nr.g1),
                        std::fabs(phi_x0 - z * t.phi_z() * nr.g2)});
    }
    return nr;
  });
  SIndependentBerwald out;
  std::vector<ReducedPoint> pts;
  std::vector<std::vector<double>> vals;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.g.push_back({nodes[i].x0, nodes[i].r, {results[i].g1, results[i].g2}});
    pts.insert(pts.end(), results[i].pts.begin(), results[i].pts.end());
    vals.insert(vals.end(), results[i].res.begin(), results[i].res.end());
  }
  out.residuals = reduce_residuals({"-phi_r/r - 2(phi - z phi_z) g1", "phi_x0 - z phi_z g2"}, pts, vals,
                                   grid.describe());
  return out;
}

ResidualReport landsberg_pde_residuals(const MetricSpec& spec, const GridSpec& grid) {
  require_three_dimensions(spec);
  require_s_independent(spec, grid);
  const auto pts = grid.points();
  static const std::vector<std::string> names{
      "phi_z N_zzz + s Omega U_zzz + Omega W_zzz", "phi_z N_szz + Omega W_szz",
      "z phi_z Psi(N_z/z) + z s Omega Psi(U_z/z) + Omega Psi(W_z)", "z phi_z Psi(N_s/z) + Omega Psi(W_s)"};
  const auto vals = parallel_map<std::vector<double>>(pts.size(), [&](std::size_t i) {
    const ReducedPoint& p = pts[i];
    const SprayJets sj = spray_jets(spec, p, 5);
    const PsiCalculus& pc = sj.pc;
    const PhiTable t = phi_table(spec, p, 1);
    const double pz = t.phi_z();
    const double om = t.phi() - p.z * pz;
    const double s = p.s, z = p.z;
    auto S = [&](const Jet& j) { return pc.d_s(j); };
    auto D = [&](const Jet& j) { return pc.d_z(j); };
    auto zpsi = [&](const Jet& j) { return z * pc.psi(pc.zk(-1, j)).value(); };
    const double e1 = pz * D(D(D(sj.N))).value() + s * om * D(D(D(sj.U))).value() + om * D(D(D(sj.W))).value();
    const double e2 = pz * S(D(D(sj.N))).value() + om * S(D(D(sj.W))).value();
    const double e3 = pz * zpsi(D(sj.N)) + s * om * zpsi(D(sj.U)) + om * pc.psi(D(sj.W)).value();
    const double e4 = pz * zpsi(S(sj.N)) + om * pc.psi(S(sj.W)).value();
    return std::vector<double>{std::fabs(e1), std::fabs(e2), std::fabs(e3), std::fabs(e4)};
  });
  return reduce_residuals(names, pts, vals, grid.describe());
}

// ---------------------------------------------------------------------------

bool ThetaProbe::smooth(double rel) const {
  const double scale = std::max(1.0, std::fabs(theta0_plus));
  return std::fabs(jump1()) <= rel * scale && std::fabs(jump3()) <= rel * scale;
}

ThetaProbe theta_probe(const MetricSpec& spec, double x0, double r, double h) {
  const double s = 0.0;
  auto theta = [&](double t) {
    const double a = std::fabs(t);
    return a * spec.phi_at({x0, r, s, 1.0 / a});
  };
  ThetaProbe out;
  out.x0 = x0;
  out.r = r;
  out.theta0_plus = fd_one_sided(theta, 0.0, 0, h, Side::Plus);
  out.theta0_minus = fd_one_sided(theta, 0.0, 0, h, Side::Minus);
  out.d1_plus = fd_one_sided(theta, 0.0, 1, h, Side::Plus);
  out.d1_minus = fd_one_sided(theta, 0.0, 1, h, Side::Minus);
  out.d3_plus = fd_one_sided(theta, 0.0, 3, h, Side::Plus);
  out.d3_minus = fd_one_sided(theta, 0.0, 3, h, Side::Minus);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::InvalidMetric: return "INVALID_METRIC";
    case Verdict::Berwald: return "BERWALD";
    case Verdict::LandsbergNotBerwald: return "LANDSBERG_NOT_BERWALD";
    case Verdict::NonLandsberg: return "NON_LANDSBERG";
  }
  return "UNKNOWN";
}

Classification classify(const MetricSpec& spec, const GridSpec& grid, double tol) {
  Classification c;
  c.tol = tol;
  c.validity = validate(spec, grid);
  try {
    c.sweep = curvature_sweep(spec, grid, false);
  } catch (const Error& e) {
    c.curvature_error = e.what();
  }
  if (c.validity.pass() && c.sweep) {
    if (c.sweep->berwald_max <= tol) {
      c.verdict = Verdict::Berwald;
    } else if (c.sweep->landsberg_max <= tol) {
      c.verdict = Verdict::LandsbergNotBerwald;
    } else {
      c.verdict = Verdict::NonLandsberg;
    }
  }
  try {
    c.s_independent = max_abs_phi_s(spec, grid) <= kSIndependenceTol;
  } catch (const Error&) {
    c.s_independent = false;
  }
  if (c.s_independent) {
    const auto nodes = xr_nodes(grid);
    c.probes = parallel_map<ThetaProbe>(nodes.size(), [&](std::size_t i) {
      try {
        return theta_probe(spec, nodes[i].x0, nodes[i].r);
      } catch (const Error&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return ThetaProbe{nodes[i].x0, nodes[i].r, nan, nan, nan, nan, nan, nan};
      }
    });
    c.regular = c.validity.pass() &&
                std::all_of(c.probes.begin(), c.probes.end(), [](const ThetaProbe& p) { return p.smooth(); });
    c.anomaly = c.regular && c.verdict == Verdict::LandsbergNotBerwald;
  }
  return c;
}

// ---------------------------------------------------------------------------

bool Concordance::berwald_agree() const {
  bool ok = psi_berwald == tensor_berwald && fit_berwald == tensor_berwald;
  if (s_independent_berwald) ok = ok && *s_independent_berwald == tensor_berwald;
  return ok;
}

bool Concordance::landsberg_agree() const {
  return !pde_landsberg || *pde_landsberg == tensor_landsberg;
}

Concordance concordance(const MetricSpec& spec, const GridSpec& grid, double tol) {
  Concordance c;
  c.metric = spec.name();
  const auto sweep = curvature_sweep(spec, grid, false);
  c.tensor_berwald_max = sweep.berwald_max;
  c.tensor_landsberg_max = sweep.landsberg_max;
  c.tensor_berwald = sweep.berwald_max <= tol;
  c.tensor_landsberg = sweep.landsberg_max <= tol;
  c.psi_max = berwald_psi_residuals(spec, grid).max_residual();
  c.psi_berwald = c.psi_max <= tol;
  c.fit_max = berwald_poly_fit(spec, grid).max_residual();
  c.fit_berwald = c.fit_max <= 10.0 * tol;
  if (max_abs_phi_s(spec, grid) <= kSIndependenceTol) {
    c.s_independent_max = s_independent_berwald_check(spec, grid).residuals.max_residual();
    c.s_independent_berwald = *c.s_independent_max <= tol;
    c.pde_max = landsberg_pde_residuals(spec, grid).max_residual();
    c.pde_landsberg = *c.pde_max <= tol;
  }
  return c;
}

}  // namespace finsler
