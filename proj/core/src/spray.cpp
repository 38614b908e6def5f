// SPDX-License-Identifier: Apache-2.0
#include "finsler/spray.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"

namespace finsler {

namespace {

double base(double v) { return v; }
double base(const Jet& j) { return j.value(); }

}  // namespace

template <class T>
SprayTerms<T> spray_terms(const PhiPartials<T>& d, double r, const T& s, const T& z) {
  if (!(r > 0.0)) throw Error("spray formulas need r > 0");
  const T rs2 = r * r - s * s;
  const T omega = d.phi - s * d.s - z * d.z;
  const T lambda = omega * d.zz + rs2 * (d.ss * d.zz - d.sz * d.sz);
  if (base(lambda) == 0.0 || !std::isfinite(base(lambda))) throw SingularLambda("Lambda vanishes");
  const T varphi = z * d.x0 + (s / r) * d.r + d.s;
  // p1 = varphi_s - 2 phi_r / r, p2 = varphi_z - 2 phi_x0
  const T p1 = z * d.x0s - d.r / r + (s / r) * d.rs + d.ss;
  const T p2 = z * d.x0z - d.x0 + (s / r) * d.rz + d.sz;
  const T two_lambda = 2.0 * lambda;
  const T U = (p1 * d.zz - p2 * d.sz) / two_lambda;
  const T L = (-(rs2 * p1 * d.sz) + p2 * (omega + rs2 * d.ss)) / two_lambda;
  const T V = (p1 * d.sz - p2 * d.ss) / two_lambda;
  const T W = (0.5 * varphi - s * d.phi * U - d.z * L - rs2 * d.s * U) / d.phi;
  const T N = z * (W + s * U) + L;
  return {N, W, L, U, V, varphi, p1, p2, omega, lambda};
}

template <class T>
SprayTerms<T> spray_terms_s_independent(const PhiPartials<T>& d, double r, const T& s, const T& z) {
  if (!(r > 0.0)) throw Error("spray formulas need r > 0");
  const T om = d.phi - z * d.z;
  if (base(om) == 0.0) throw SingularOmega("phi - z phi_z vanishes");
  if (base(d.zz) == 0.0) throw SingularPhiZZ("phi_zz vanishes");
  const T U = -d.r / (2.0 * r * om);
  const T L = (z * d.x0z + (s / r) * d.rz - d.x0) / (2.0 * d.zz);
  const T W = (0.5 * z * d.x0 + s * d.r / (2.0 * r) - s * d.phi * U - d.z * L) / d.phi;
  const T N = z * (W + s * U) + L;
  const T zero = 0.0 * d.phi;
  return {N, W, L, U, zero, zero, zero, zero, om, om * d.zz};
}

template SprayTerms<double> spray_terms(const PhiPartials<double>&, double, const double&, const double&);
template SprayTerms<Jet> spray_terms(const PhiPartials<Jet>&, double, const Jet&, const Jet&);
template SprayTerms<double> spray_terms_s_independent(const PhiPartials<double>&, double, const double&,
                                                      const double&);
template SprayTerms<Jet> spray_terms_s_independent(const PhiPartials<Jet>&, double, const Jet&, const Jet&);

PhiPartials<double> phi_partials(const PhiTable& t) {
  auto p = [&](int a, int b, int c, int d) { return t.partial(a, b, c, d); };
  return {t.phi(),     p(0, 0, 1, 0), p(0, 0, 0, 1), p(0, 0, 2, 0), p(0, 0, 1, 1), p(0, 0, 0, 2),
          p(1, 0, 0, 0), p(0, 1, 0, 0), p(1, 0, 1, 0), p(1, 0, 0, 1), p(0, 1, 1, 0), p(0, 1, 0, 1)};
}

SprayQuantities spray_quantities(const PhiTable& t, bool s_independent) {
  if (t.order() < 2) throw OrderExceeded("spray quantities need a phi table of order >= 2");
  const auto& pt = t.point();
  const PhiPartials<double> d = phi_partials(t);
  const auto g = spray_terms(d, pt.r, pt.s, pt.z);
  SprayQuantities q{g.N, g.W, g.L, g.U, g.V, g.varphi, g.p1, g.p2, g.omega, g.lambda, std::nullopt};
  if (s_independent) {
    const auto c = spray_terms_s_independent(d, pt.r, pt.s, pt.z);
    double dev = 0.0;
    for (auto [a, b] : {std::pair{g.N, c.N}, {g.W, c.W}, {g.L, c.L}, {g.U, c.U}}) {
      dev = std::max(dev, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
    }
    q.corollary_deviation = dev;
  }
  return q;
}

SprayCoefficients spray(const MetricSpec& spec, const SamplePoint& p) {
  if (p.n() != spec.n()) throw Error("sample point dimension does not match the metric");
  const auto q = spray_quantities(phi_table(spec, p.reduced(), 2));
  const double u = p.u();
  const double u2 = u * u;
  SprayCoefficients out;
  out.G.resize(static_cast<std::size_t>(p.n()) + 1);
  out.G[0] = u2 * q.N;
  for (int i = 0; i < p.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.G[k + 1] = u2 * (q.W * p.ybar[k] / u + q.U * p.xbar[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Solves g X = b for jets by Gaussian elimination with partial pivoting on
/// base values.
std::vector<Jet> solve_jet_system(std::vector<std::vector<Jet>> g, std::vector<Jet> b) {
  const std::size_t m = b.size();
  double scale = 0.0;
  for (const auto& row : g) {
    for (const auto& e : row) scale = std::max(scale, std::fabs(e.value()));
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::fabs(g[r][col].value()) > std::fabs(g[piv][col].value())) piv = r;
    }
    if (!(std::fabs(g[piv][col].value()) > 1e-13 * scale)) throw SingularMetric("fundamental tensor is singular");
    std::swap(g[piv], g[col]);
    std::swap(b[piv], b[col]);
    const Jet inv = reciprocal(g[col][col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const Jet f = g[r][col] * inv;
      for (std::size_t c = col; c < m; ++c) g[r][c] -= f * g[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Jet> x(m, b[0]);
  for (std::size_t k = m; k-- > 0;) {
    Jet acc = b[k];
    for (std::size_t c = k + 1; c < m; ++c) acc -= g[k][c] * x[c];
    x[k] = acc / g[k][k];
  }
  return x;
}

}  // namespace

std::vector<Jet> spray_oracle_jets(const MetricSpec& spec, const SamplePoint& p, int y_order) {
  const int n = p.n();
  if (n != spec.n()) throw Error("sample point dimension does not match the metric");
  const int dim = n + 1;
  const int order = y_order + 2;

  std::vector<std::string> names{"eps"};
  std::vector<std::string> ynames;
  for (int a = 0; a < dim; ++a) {
    names.push_back("y" + std::to_string(a));
    ynames.push_back("y" + std::to_string(a));
  }
  const JetSpace full(names, order);
  const JetSpace yspace(ynames, order);
  std::vector<int> y_source(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) y_source[static_cast<std::size_t>(a)] = a + 1;

  std::vector<Jet> yvar;
  for (int a = 0; a < dim; ++a) {
    yvar.push_back(Jet::variable(yspace.with_order(y_order), a, a == 0 ? p.y0 : p.ybar[static_cast<std::size_t>(a - 1)]));
  }

  std::vector<Jet> fx;                    // [F^2]_{x^C} as y-jets of order y_order + 1
  std::vector<std::vector<Jet>> g;        // g_AB of order y_order
  for (int c = 0; c < dim; ++c) {
    const Jet eps = Jet::variable(full, 0, 0.0);
    RawJets raw{Jet::constant(full, p.x0), {}, Jet::variable(full, 1, p.y0), {}};
    if (c == 0) raw.x0 += eps;
    for (int i = 0; i < n; ++i) {
      Jet xi = Jet::constant(full, p.xbar[static_cast<std::size_t>(i)]);
      if (c == i + 1) xi += eps;
      raw.xbar.push_back(xi);
      raw.ybar.push_back(Jet::variable(full, i + 2, p.ybar[static_cast<std::size_t>(i)]));
    }
    const Jet f = finsler_jet(spec, raw);
    const Jet f2 = f * f;
    fx.push_back(project(f2.derivative(0), yspace, y_source));
    if (c == 0) {
      const Jet f2y = project(f2, yspace, y_source);
      g.assign(static_cast<std::size_t>(dim), std::vector<Jet>(static_cast<std::size_t>(dim), f2y));
      for (int a = 0; a < dim; ++a) {
        const Jet da = f2y.derivative(a);
        for (int b = a; b < dim; ++b) {
          const Jet gab = 0.5 * da.derivative(b);
          g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = gab;
          g[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = gab;
        }
      }
    }
  }

  std::vector<Jet> rhs;
  for (int b = 0; b < dim; ++b) {
    Jet acc = -fx[static_cast<std::size_t>(b)].truncated(y_order);
    for (int c = 0; c < dim; ++c) acc += fx[static_cast<std::size_t>(c)].derivative(b) * yvar[static_cast<std::size_t>(c)];
    rhs.push_back(0.25 * acc);
  }
  return solve_jet_system(std::move(g), std::move(rhs));
}

SprayCoefficients spray_oracle(const MetricSpec& spec, const SamplePoint& p) {
  const auto jets = spray_oracle_jets(spec, p, 0);
  SprayCoefficients out;
  for (const auto& j : jets) out.G.push_back(j.value());
  return out;
}

// ---------------------------------------------------------------------------

SprayJets spray_jets(const MetricSpec& spec, const ReducedPoint& p, int phi_order) {
  const PhiTable t = phi_table(spec, p, phi_order);
  const JetSpace sz(sz_variable_names(), phi_order);
  const std::array<int, 2> src{2, 3};
  auto part = [&](int a, int b, int c, int d) {
    return project(t.jet().derivative(MultiIndex{a, b, c, d}), sz, src);
  };
  PhiPartials<Jet> d{part(0, 0, 0, 0), part(0, 0, 1, 0), part(0, 0, 0, 1), part(0, 0, 2, 0),
                     part(0, 0, 1, 1), part(0, 0, 0, 2), part(1, 0, 0, 0), part(0, 1, 0, 0),
                     part(1, 0, 1, 0), part(1, 0, 0, 1), part(0, 1, 1, 0), part(0, 1, 0, 1)};
  PsiCalculus pc(p.s, p.z);
  const int o = phi_order - 2;
  const auto terms = spray_terms(d, p.r, pc.s_jet(o), pc.z_jet(o));
  return {p, pc, terms.N, terms.W, terms.L, terms.U, terms.V};
}

Agreement compare(std::span<const double> a, std::span<const double> b, double rel, double abs_floor) {
  if (a.size() != b.size()) throw Error("compare: size mismatch");
  Agreement out;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.max_abs_diff = std::max(out.max_abs_diff, std::fabs(a[i] - b[i]));
    ma = std::max(ma, std::fabs(a[i]));
    mb = std::max(mb, std::fabs(b[i]));
  }
  if (!std::isfinite(out.max_abs_diff)) out.max_abs_diff = std::numeric_limits<double>::infinity();
  out.scale = std::max(ma, mb);
  out.tolerance = std::max(rel * out.scale, abs_floor);
  out.pass = out.max_abs_diff <= out.tolerance;
  return out;
}

}  // namespace finsler
