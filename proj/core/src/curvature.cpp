// SPDX-License-Identifier: Apache-2.0
#include "finsler/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

double BerwaldTensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::fabs(v));
  return m;
}

double BerwaldTensor::frobenius() const {
  double acc = 0.0;
  for (double v : c_) acc += v * v;
  return std::sqrt(acc);
}

double BerwaldTensor::symmetry_defect() const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) {
          const double v = (*this)(a, b, c, d);
          for (double w : {(*this)(a, c, b, d), (*this)(a, b, d, c), (*this)(a, d, c, b)})
            m = std::max(m, std::fabs(v - w));
        }
  return m;
}

double BerwaldTensor::contraction_defect(std::span<const double> y) const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c) {
        double acc = 0.0;
        for (int d = 0; d < dim_; ++d) acc += (*this)(a, b, c, d) * y[static_cast<std::size_t>(d)];
        m = std::max(m, std::fabs(acc));
      }
  return m;
}

double LandsbergTensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::fabs(v));
  return m;
}

double LandsbergTensor::frobenius() const {
  double acc = 0.0;
  for (double v : c_) acc += v * v;
  return std::sqrt(acc);
}

double LandsbergTensor::symmetry_defect() const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c) {
        const double v = (*this)(a, b, c);
        for (double w : {(*this)(b, a, c), (*this)(a, c, b), (*this)(c, b, a)}) m = std::max(m, std::fabs(v - w));
      }
  return m;
}

double LandsbergTensor::contraction_defect(std::span<const double> y) const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      double acc = 0.0;
      for (int c = 0; c < dim_; ++c) acc += (*this)(a, b, c) * y[static_cast<std::size_t>(c)];
      m = std::max(m, std::fabs(acc));
    }
  return m;
}

const std::array<std::string, kBerwaldFamilies>& berwald_family_names() {
  static const std::array<std::string, kBerwaldFamilies> names{"B0_000", "B0_00l", "B0_0kl", "B0_jkl",
                                                               "Bi_000", "Bi_00l", "Bi_0kl", "Bi_jkl"};
  return names;
}

const std::array<std::string, kLandsbergFamilies>& landsberg_family_names() {
  static const std::array<std::string, kLandsbergFamilies> names{"L_000", "L_00l", "L_0kl", "L_jkl"};
  return names;
}

namespace {

int spatial_count(std::initializer_list<int> idx) {
  return static_cast<int>(std::count_if(idx.begin(), idx.end(), [](int v) { return v != 0; }));
}

}  // namespace

int berwald_family(int a, int b, int c, int d) { return (a == 0 ? 0 : 4) + spatial_count({b, c, d}); }

int landsberg_family(int a, int b, int c) { return spatial_count({a, b, c}); }

std::vector<double> y_vector(const SamplePoint& p) {
  std::vector<double> y{p.y0};
  y.insert(y.end(), p.ybar.begin(), p.ybar.end());
  return y;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

/// Scalar coefficients of one of N, U, W: the Psi expressions that appear in
/// the component families, evaluated at the base point.
struct Coeffs {
  double zzz, szz, ssz, sss, zz, sz, ss;
  double psi_zz, psi_sz, psi_ss, psi_z, psi_s;
  double zpsi_z_z;     // z Psi(T_z/z)
  double zpsi_s_z;     // z Psi(T_s/z)
  double zpsi_z;       // z Psi(T/z)
  double p2_z_z;       // Psi(z^2 Psi(T_z/z)) / z
  double p2_s_z;       // Psi(z^2 Psi(T_s/z)) / z
  double p2_zz2;       // Psi(z^2 Psi(T/z^2))
  double p2_z1;        // Psi(z^2 Psi(T/z)) / z
  double p2_zd;        // Psi(z^2 Psi(T_z)) / z^2
  double p2_sd;        // Psi(z^2 Psi(T_s)) / z^2
  double p3_zz2;       // Psi(z^2 Psi(z^2 Psi(T/z^2))) / z^2
  double p3_z1;        // Psi(z^2 Psi(z^2 Psi(T/z))) / z^3
  double psis_p2_zz2;  // d_s Psi(z^2 Psi(T/z^2))
  double psis_s;       // d_s Psi(T_s)
  double psiz_z;       // d_z Psi(T_z)
  double psi_zsz;      // Psi(z T_sz) / z
};

Coeffs coeffs(const PsiCalculus& pc, const Jet& t) {
  auto P = [&](const Jet& j) { return pc.psi(j); };
  auto Z = [&](int k, const Jet& j) { return pc.zk(k, j); };
  auto S = [&](const Jet& j) { return pc.d_s(j); };
  auto D = [&](const Jet& j) { return pc.d_z(j); };
  const double z = pc.z();
  const Jet ts = S(t), tz = D(t);
  const Jet tss = S(ts), tsz = D(ts), tzz = D(tz);
  Coeffs c{};
  c.zzz = D(tzz).value();
  c.szz = S(tzz).value();
  c.ssz = S(tsz).value();
  c.sss = S(tss).value();
  c.zz = tzz.value();
  c.sz = tsz.value();
  c.ss = tss.value();
  c.psi_zz = P(tzz).value();
  c.psi_sz = P(tsz).value();
  c.psi_ss = P(tss).value();
  c.psi_z = P(tz).value();
  c.psi_s = P(ts).value();
  c.zpsi_z_z = z * P(Z(-1, tz)).value();
  c.zpsi_s_z = z * P(Z(-1, ts)).value();
  c.zpsi_z = z * P(Z(-1, t)).value();
  c.p2_z_z = P(Z(2, P(Z(-1, tz)))).value() / z;
  c.p2_s_z = P(Z(2, P(Z(-1, ts)))).value() / z;
  const Jet q = Z(2, P(Z(-2, t)));
  c.p2_zz2 = P(q).value();
  c.p2_z1 = P(Z(2, P(Z(-1, t)))).value() / z;
  c.p2_zd = P(Z(2, P(tz))).value() / (z * z);
  c.p2_sd = P(Z(2, P(ts))).value() / (z * z);
  c.p3_zz2 = P(Z(2, P(q))).value() / (z * z);
  c.p3_z1 = P(Z(2, P(Z(2, P(Z(-1, t)))))).value() / (z * z * z);
  c.psis_p2_zz2 = pc.psi_s(q).value();
  c.psis_s = pc.psi_s(ts).value();
  c.psiz_z = pc.psi_z(tz).value();
  c.psi_zsz = P(Z(1, tsz)).value() / z;
  return c;
}

struct Frame {
  int n;
  double u;
  std::vector<double> x;   // xbar
  std::vector<double> uv;  // ybar / u
  double X(int i) const { return x[static_cast<std::size_t>(i)]; }
  double U(int i) const { return uv[static_cast<std::size_t>(i)]; }
};

double d(int a, int b) { return kronecker(a, b); }

// Berwald families; spatial indices are 0-based.
double b0_000(const Coeffs& N, const Frame& f) { return N.zzz / f.u; }

double b0_00l(const Coeffs& N, const Frame& f, int l) { return (N.szz * f.X(l) + N.psi_zz * f.U(l)) / f.u; }

double b0_0kl(const Coeffs& N, const Frame& f, int k, int l) {
  return (N.ssz * f.X(k) * f.X(l) + N.psi_sz * (f.X(l) * f.U(k) + f.X(k) * f.U(l)) + N.zpsi_z_z * d(k, l) +
          N.p2_z_z * f.U(k) * f.U(l)) /
         f.u;
}

double b0_jkl(const Coeffs& N, const Frame& f, int j, int k, int l) {
  auto term = [&](int a, int b, int c) {
    return N.sss / 3.0 * f.X(a) * f.X(b) * f.X(c) + N.psi_ss * f.X(a) * f.X(b) * f.U(c) +
           N.zpsi_s_z * f.X(a) * d(b, c) + N.p2_zz2 * f.U(a) * d(b, c) + N.p2_s_z * f.X(a) * f.U(b) * f.U(c) +
           N.p3_zz2 / 3.0 * f.U(a) * f.U(b) * f.U(c);
  };
  return cyclic(term, j, k, l) / f.u;
}

double bi_000(const Coeffs& U, const Coeffs& W, const Frame& f, int i) {
  return (U.zzz * f.X(i) + W.zzz * f.U(i)) / f.u;
}

double bi_00l(const Coeffs& U, const Coeffs& W, const Frame& f, int i, int l) {
  return (U.szz * f.X(l) * f.X(i) + U.psi_zz * f.X(i) * f.U(l) + W.zz * d(i, l) + W.szz * f.X(l) * f.U(i) +
          W.psiz_z * f.U(l) * f.U(i)) /
         f.u;
}

double bi_0kl(const Coeffs& U, const Coeffs& W, const Frame& f, int i, int k, int l) {
  const double plain = U.ssz * f.X(k) * f.X(l) * f.X(i) + U.zpsi_z_z * d(k, l) * f.X(i) +
                       U.p2_z_z * f.U(k) * f.U(l) * f.X(i) + W.ssz * f.X(k) * f.X(l) * f.U(i) +
                       W.p2_zd * f.U(k) * f.U(l) * f.U(i);
  const double sym = cyclic(
      [&](int a, int b) {
        return U.psi_sz * f.U(a) * f.X(b) * f.X(i) + W.sz * f.X(a) * d(b, i) + W.psi_zsz * f.X(b) * f.U(a) * f.U(i);
      },
      k, l);
  const double rot = cyclic([&](int a, int b, int c) { return d(a, c) * f.U(b); }, i, k, l);
  return (plain + sym + W.psi_z * rot) / f.u;
}

double bi_jkl(const Coeffs& U, const Coeffs& W, const Frame& f, int i, int j, int k, int l) {
  const double upart =
      U.sss * f.X(j) * f.X(k) * f.X(l) + U.p3_zz2 * f.U(j) * f.U(k) * f.U(l) +
      cyclic(
          [&](int a, int b, int c) {
            return U.psi_ss * f.U(a) * f.X(b) * f.X(c) + U.zpsi_s_z * d(a, b) * f.X(c) +
                   U.psis_p2_zz2 * f.U(a) * f.U(b) * f.X(c) + U.p2_zz2 * d(a, b) * f.U(c);
          },
          j, k, l);
  double wpart = cyclic(
      [&](int a, int b, int c) {
        return W.ss * d(i, a) * f.X(b) * f.X(c) + W.psis_s * f.U(i) * f.U(a) * f.X(b) * f.X(c) +
               W.p2_sd * f.X(a) * f.U(b) * f.U(c) * f.U(i);
      },
      j, k, l);
  wpart += W.zpsi_z * cyclic([&](int a, int b, int c) { return d(j, a) * d(b, c); }, i, k, l);
  wpart += W.psi_s * (f.X(j) * cyclic([&](int a, int b, int c) { return f.U(a) * d(b, c); }, i, k, l) +
                      f.X(k) * cyclic([&](int a, int b, int c) { return f.U(b) * d(a, c); }, i, j, l) +
                      f.X(l) * cyclic([&](int a, int b, int c) { return f.U(a) * d(b, c); }, i, j, k));
  wpart += W.p2_z1 *
           cyclic([&](int a, int b, int c) { return d(j, a) * f.U(b) * f.U(c) + d(a, b) * f.U(c) * f.U(j); }, i, k, l);
  wpart += W.sss * f.X(j) * f.X(k) * f.X(l) * f.U(i);
  wpart += W.p3_z1 * f.U(j) * f.U(k) * f.U(l) * f.U(i);
  return (upart * f.X(i) + wpart) / f.u;
}

/// Reduced-coordinate scalars entering the Landsberg closed form.
struct LandsbergScalars {
  double phi, phi_s, phi_z, omega, s, z, R, Q;
};

double lbar_000(const Coeffs& N, const Coeffs& U, const Coeffs& W, const LandsbergScalars& g) {
  return g.phi_z * N.zzz + g.R * U.zzz + g.Q * W.zzz;
}

double lbar_00l(const Coeffs& N, const Coeffs& U, const Coeffs& W, const LandsbergScalars& g, const Frame& f, int l) {
  const double cx = g.phi_z * N.szz + g.R * U.szz + g.Q * W.szz + g.phi_s * W.zz;
  const double cu = g.phi_z * N.psi_zz + g.R * U.psi_zz + g.Q * W.psi_zz - g.s * g.phi_s * W.zz;
  return cx * f.X(l) + cu * f.U(l);
}

double lbar_0kl(const Coeffs& N, const Coeffs& U, const Coeffs& W, const LandsbergScalars& g, const Frame& f, int k,
                int l) {
  const double cxx = g.phi_z * N.ssz + g.R * U.ssz + g.Q * W.ssz + 2.0 * g.phi_s * W.sz;
  const double cd = g.phi_z * N.zpsi_z_z + g.R * U.zpsi_z_z + g.Q * W.psi_z;
  const double cuu = g.phi_z * N.p2_z_z + g.R * U.p2_z_z + g.Q * W.p2_zd + 2.0 * g.omega * W.psi_z;
  const double cxu =
      g.phi_z * N.psi_sz + g.R * U.psi_sz + g.Q * W.psi_sz + g.phi_s * W.psi_z - g.s * g.phi_s * W.sz;
  return cxx * f.X(k) * f.X(l) + cd * d(k, l) + cuu * f.U(k) * f.U(l) + cxu * (f.X(k) * f.U(l) + f.X(l) * f.U(k));
}

double lbar_jkl(const Coeffs& N, const Coeffs& U, const Coeffs& W, const LandsbergScalars& g, const Frame& f, int j,
                int k, int l) {
  const double cxxx = (g.phi_z * N.sss + g.R * U.sss + g.Q * W.sss) / 3.0 + g.phi_s * W.ss;
  const double cuxx = g.phi_z * N.psi_ss + g.R * U.psi_ss + g.Q * W.psi_ss + 2.0 * g.phi_s * W.psi_s -
                      g.s * g.phi_s * W.ss;
  // N.p3_zz2 = Psi(z^2 Psi(z^2 Psi(N/z^2)))/z^2; W.p3_z1 = Psi(z^2 Psi(z^2 Psi(W/z)))/z^3
  const double cuuu = (g.phi_z * N.p3_zz2 + g.R * U.p3_zz2 + g.Q * W.p3_z1) / 3.0 + g.omega * W.p2_z1;
  const double cdx = g.phi_z * N.zpsi_s_z + g.R * U.zpsi_s_z + g.Q * W.psi_s + g.phi_s * W.zpsi_z;
  const double cuux = g.phi_z * N.p2_s_z + g.R * U.p2_s_z + g.Q * W.p2_sd + g.phi_s * W.p2_z1 + 2.0 * g.omega * W.psi_s;
  const double cdu = g.phi_z * N.p2_zz2 + g.R * U.p2_zz2 + g.Q * W.p2_z1 + g.omega * W.zpsi_z;
  auto term = [&](int a, int b, int c) {
    return cxxx * f.X(a) * f.X(b) * f.X(c) + cuxx * f.U(a) * f.X(b) * f.X(c) + cuuu * f.U(a) * f.U(b) * f.U(c) +
           cdx * d(a, b) * f.X(c) + cuux * f.U(a) * f.U(b) * f.X(c) + cdu * d(a, b) * f.U(c);
  };
  return cyclic(term, j, k, l);
}

struct ClosedInputs {
  Frame frame;
  Coeffs N, U, W;
  LandsbergScalars g;
};

ClosedInputs closed_inputs(const MetricSpec& spec, const SamplePoint& p) {
  if (p.n() != spec.n()) throw Error("sample point dimension does not match the metric");
  const ReducedPoint rp = p.reduced();
  if (rp.z == 0.0) throw ZDivision("closed curvature forms divide by z");
  const SprayJets sj = spray_jets(spec, rp, 5);
  Frame f{p.n(), p.u(), p.xbar, p.unit_ybar()};
  const PhiTable t = phi_table(spec, rp, 1);
  const double phi = t.phi(), ps = t.phi_s(), pz = t.phi_z();
  const double om = phi - rp.s * ps - rp.z * pz;
  LandsbergScalars g{phi, ps, pz, om, rp.s, rp.z, rp.r * rp.r * ps + rp.s * om, rp.s * ps + om};
  return {std::move(f), coeffs(sj.pc, sj.N), coeffs(sj.pc, sj.U), coeffs(sj.pc, sj.W), g};
}

/// Spatial indices (0-based) of a tuple, in their original order, with the
/// zero count.
std::vector<int> spatial(std::initializer_list<int> idx) {
  std::vector<int> out;
  for (int v : idx)
    if (v != 0) out.push_back(v - 1);
  return out;
}

BerwaldTensor assemble_berwald(const ClosedInputs& in) {
  const Frame& f = in.frame;
  const int dim = f.n + 1;
  BerwaldTensor b(dim);
  for (int a = 0; a < dim; ++a)
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q)
        for (int r = 0; r < dim; ++r) {
          const auto sp = spatial({p, q, r});
          double v = 0.0;
          if (a == 0) {
            switch (sp.size()) {
              case 0: v = b0_000(in.N, f); break;
              case 1: v = b0_00l(in.N, f, sp[0]); break;
              case 2: v = b0_0kl(in.N, f, sp[0], sp[1]); break;
              default: v = b0_jkl(in.N, f, sp[0], sp[1], sp[2]); break;
            }
          } else {
            const int i = a - 1;
            switch (sp.size()) {
              case 0: v = bi_000(in.U, in.W, f, i); break;
              case 1: v = bi_00l(in.U, in.W, f, i, sp[0]); break;
              case 2: v = bi_0kl(in.U, in.W, f, i, sp[0], sp[1]); break;
              default: v = bi_jkl(in.U, in.W, f, i, sp[0], sp[1], sp[2]); break;
            }
          }
          b(a, p, q, r) = v;
        }
  return b;
}

LandsbergTensor assemble_landsberg(const ClosedInputs& in) {
  const Frame& f = in.frame;
  const int dim = f.n + 1;
  LandsbergTensor t(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        const auto sp = spatial({a, b, c});
        double v = 0.0;
        switch (sp.size()) {
          case 0: v = lbar_000(in.N, in.U, in.W, in.g); break;
          case 1: v = lbar_00l(in.N, in.U, in.W, in.g, f, sp[0]); break;
          case 2: v = lbar_0kl(in.N, in.U, in.W, in.g, f, sp[0], sp[1]); break;
          default: v = lbar_jkl(in.N, in.U, in.W, in.g, f, sp[0], sp[1], sp[2]); break;
        }
        t(a, b, c) = 0.5 * in.g.phi * v;
      }
  return t;
}

}  // namespace

BerwaldTensor berwald_closed(const MetricSpec& spec, const SamplePoint& p) {
  return assemble_berwald(closed_inputs(spec, p));
}

LandsbergTensor landsberg_closed(const MetricSpec& spec, const SamplePoint& p) {
  return assemble_landsberg(closed_inputs(spec, p));
}

ClosedCurvature curvature_closed(const MetricSpec& spec, const SamplePoint& p) {
  const ClosedInputs in = closed_inputs(spec, p);
  return {assemble_berwald(in), assemble_landsberg(in)};
}

// ---------------------------------------------------------------------------
// Oracles

BerwaldTensor berwald_oracle(const MetricSpec& spec, const SamplePoint& p) {
  const auto G = spray_oracle_jets(spec, p, 3);
  const int dim = p.n() + 1;
  BerwaldTensor b(dim);
  MultiIndex idx(static_cast<std::size_t>(dim), 0);
  for (int a = 0; a < dim; ++a)
    for (int x = 0; x < dim; ++x)
      for (int y = 0; y < dim; ++y)
        for (int w = 0; w < dim; ++w) {
          std::fill(idx.begin(), idx.end(), 0);
          ++idx[static_cast<std::size_t>(x)];
          ++idx[static_cast<std::size_t>(y)];
          ++idx[static_cast<std::size_t>(w)];
          b(a, x, y, w) = G[static_cast<std::size_t>(a)].partial(idx);
        }
  return b;
}

LandsbergTensor landsberg_from_berwald(const MetricSpec& spec, const SamplePoint& p, const BerwaldTensor& b) {
  const ReducedPoint rp = p.reduced();
  const PhiTable t = phi_table(spec, rp, 1);
  const double om = t.phi() - rp.s * t.phi_s() - rp.z * t.phi_z();
  const double F = p.u() * t.phi();
  const auto uv = p.unit_ybar();
  const int dim = p.n() + 1;
  std::vector<double> fy(static_cast<std::size_t>(dim));
  fy[0] = t.phi_z();
  for (int i = 0; i < p.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    fy[k + 1] = t.phi_s() * p.xbar[k] + om * uv[k];
  }
  LandsbergTensor l(dim);
  for (int a = 0; a < dim; ++a)
    for (int x = 0; x < dim; ++x)
      for (int y = 0; y < dim; ++y) {
        double acc = 0.0;
        for (int q = 0; q < dim; ++q) acc += fy[static_cast<std::size_t>(q)] * b(q, a, x, y);
        l(a, x, y) = 0.5 * F * acc;
      }
  return l;
}

LandsbergTensor landsberg_oracle(const MetricSpec& spec, const SamplePoint& p) {
  return landsberg_from_berwald(spec, p, berwald_oracle(spec, p));
}

// ---------------------------------------------------------------------------

std::array<double, kBerwaldFamilies> berwald_family_diff(const BerwaldTensor& a, const BerwaldTensor& b) {
  if (a.dim() != b.dim()) throw Error("tensor dimension mismatch");
  std::array<double, kBerwaldFamilies> out{};
  const int dim = a.dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          auto& m = out[static_cast<std::size_t>(berwald_family(i, j, k, l))];
          m = std::max(m, std::fabs(a(i, j, k, l) - b(i, j, k, l)));
        }
  return out;
}

std::array<double, kLandsbergFamilies> landsberg_family_diff(const LandsbergTensor& a, const LandsbergTensor& b) {
  if (a.dim() != b.dim()) throw Error("tensor dimension mismatch");
  std::array<double, kLandsbergFamilies> out{};
  const int dim = a.dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        auto& m = out[static_cast<std::size_t>(landsberg_family(i, j, k))];
        m = std::max(m, std::fabs(a(i, j, k) - b(i, j, k)));
      }
  return out;
}

std::array<double, kBerwaldFamilies> berwald_family_max(const BerwaldTensor& t) {
  return berwald_family_diff(t, BerwaldTensor(t.dim()));
}

std::array<double, kLandsbergFamilies> landsberg_family_max(const LandsbergTensor& t) {
  return landsberg_family_diff(t, LandsbergTensor(t.dim()));
}

// ---------------------------------------------------------------------------

namespace {

struct PointResult {
  ReducedPoint point;
  double bmax, lmax;
  std::array<double, kBerwaldFamilies> bfam;
  std::array<double, kLandsbergFamilies> lfam;
  double sym, contraction;
  double bdiff = 0.0, ldiff = 0.0;
  bool bpass = true, lpass = true;
  std::array<double, kBerwaldFamilies> bfam_diff{};
  std::array<double, kLandsbergFamilies> lfam_diff{};
};

template <std::size_t K>
void max_into(std::array<double, K>& acc, const std::array<double, K>& v) {
  for (std::size_t i = 0; i < K; ++i) acc[i] = std::max(acc[i], v[i]);
}

}  // namespace

CurvatureSweep curvature_sweep(const MetricSpec& spec, const GridSpec& grid, bool with_oracle, double oracle_rel) {
  const auto pts = grid.points();
  const auto results = parallel_map<PointResult>(pts.size(), [&](std::size_t idx) {
    const SamplePoint sp = SamplePoint::canonical(spec.n(), pts[idx]);
    const ClosedCurvature cc = curvature_closed(spec, sp);
    const auto y = y_vector(sp);
    PointResult r{pts[idx],
                  cc.berwald.max_abs(),
                  cc.landsberg.max_abs(),
                  berwald_family_max(cc.berwald),
                  landsberg_family_max(cc.landsberg),
                  std::max(cc.berwald.symmetry_defect(), cc.landsberg.symmetry_defect()),
                  std::max(cc.berwald.contraction_defect(y) / (cc.berwald.max_abs() + 1.0),
                           cc.landsberg.contraction_defect(y) / (cc.landsberg.max_abs() + 1.0))};
    if (with_oracle) {
      const BerwaldTensor bo = berwald_oracle(spec, sp);
      const LandsbergTensor lo = landsberg_from_berwald(spec, sp, bo);
      const auto ab = compare(cc.berwald.components(), bo.components(), oracle_rel);
      const auto al = compare(cc.landsberg.components(), lo.components(), oracle_rel);
      r.bdiff = ab.max_abs_diff;
      r.ldiff = al.max_abs_diff;
      r.bpass = ab.pass;
      r.lpass = al.pass;
      r.bfam_diff = berwald_family_diff(cc.berwald, bo);
      r.lfam_diff = landsberg_family_diff(cc.landsberg, lo);
    }
    return r;
  });
  CurvatureSweep out;
  out.points = results.size();
  out.with_oracle = with_oracle;
  for (const auto& r : results) {
    if (r.bmax >= out.berwald_max) {
      out.berwald_max = r.bmax;
      out.berwald_argmax = r.point;
    }
    if (r.lmax >= out.landsberg_max) {
      out.landsberg_max = r.lmax;
      out.landsberg_argmax = r.point;
    }
    max_into(out.berwald_family, r.bfam);
    max_into(out.landsberg_family, r.lfam);
    out.symmetry_defect = std::max(out.symmetry_defect, r.sym);
    out.contraction_defect = std::max(out.contraction_defect, r.contraction);
    out.berwald_oracle_diff = std::max(out.berwald_oracle_diff, r.bdiff);
    out.landsberg_oracle_diff = std::max(out.landsberg_oracle_diff, r.ldiff);
    out.berwald_oracle_pass = out.berwald_oracle_pass && r.bpass;
    out.landsberg_oracle_pass = out.landsberg_oracle_pass && r.lpass;
    max_into(out.berwald_family_oracle_diff, r.bfam_diff);
    max_into(out.landsberg_family_oracle_diff, r.lfam_diff);
  }
  return out;
}

}  // namespace finsler
