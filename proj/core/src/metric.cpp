// SPDX-License-Identifier: Apache-2.0
#include "finsler/metric.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double SamplePoint::r() const { return std::sqrt(dot(xbar, xbar)); }
double SamplePoint::u() const { return std::sqrt(dot(ybar, ybar)); }
double SamplePoint::s() const { return dot(xbar, ybar) / u(); }
double SamplePoint::z() const { return y0 / u(); }

std::vector<double> SamplePoint::unit_ybar() const {
  const double uu = u();
  std::vector<double> out(ybar);
  for (auto& v : out) v /= uu;
  return out;
}

SamplePoint SamplePoint::canonical(int n, const ReducedPoint& p, double u) {
  if (n < 2) throw Error("canonical point needs n >= 2");
  if (!(p.r > 0.0) || !(std::fabs(p.s) < p.r)) throw Error("canonical point needs r > 0 and |s| < r");
  SamplePoint out;
  out.x0 = p.x0;
  out.xbar.assign(static_cast<std::size_t>(n), 0.0);
  out.ybar.assign(static_cast<std::size_t>(n), 0.0);
  out.xbar[0] = p.r;
  out.ybar[0] = u * p.s / p.r;
  out.ybar[1] = u * std::sqrt(p.r * p.r - p.s * p.s) / p.r;
  out.y0 = p.z * u;
  return out;
}

SamplePoint SamplePoint::with_scaled_y(double lambda) const {
  SamplePoint out = *this;
  out.y0 *= lambda;
  for (auto& v : out.ybar) v *= lambda;
  return out;
}

SamplePoint SamplePoint::rotated(const Eigen::MatrixXd& O) const {
  SamplePoint out = *this;
  Eigen::Map<const Eigen::VectorXd> x(xbar.data(), n());
  Eigen::Map<const Eigen::VectorXd> y(ybar.data(), n());
  Eigen::VectorXd ox = O * x;
  Eigen::VectorXd oy = O * y;
  out.xbar.assign(ox.data(), ox.data() + n());
  out.ybar.assign(oy.data(), oy.data() + n());
  return out;
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

bool DomainBox::contains(const ReducedPoint& p) const noexcept {
  return p.r > 0.0 && std::fabs(p.s) < p.r && x0.contains(p.x0) && r.contains(p.r) && s.contains(p.s) &&
         z.contains(p.z);
}

// ---------------------------------------------------------------------------

MetricSpec::MetricSpec(std::string name, Expression phi, ParameterEnv params, int n, DomainBox domain)
    : name_(std::move(name)), phi_(std::move(phi)), params_(std::move(params)), n_(n), domain_(domain) {
  if (n_ < 2) throw Error("metric dimension n must be at least 2");
  for (const auto& p : phi_.parameters()) {
    if (!params_.contains(p)) throw UnknownIdentifier(p, 0);
  }
}

MetricSpec MetricSpec::from_text(std::string name, std::string_view phi_text, ParameterEnv params, int n) {
  Expression e = parse(phi_text, params);
  return MetricSpec(std::move(name), std::move(e), std::move(params), n);
}

MetricSpec MetricSpec::from_family(std::string_view family, const ParameterEnv& params, int n) {
  return MetricSpec(std::string(family), builtin(family, params), {}, n);
}

MetricSpec MetricSpec::with_dimension(int n) const {
  return MetricSpec(name_, phi_, params_, n, domain_);
}

MetricSpec MetricSpec::with_domain(DomainBox domain) const {
  return MetricSpec(name_, phi_, params_, n_, domain);
}

double MetricSpec::phi_at(const ReducedPoint& p) const {
  return evaluate(phi_, {p.x0, p.r, p.s, p.z}, params_);
}

double MetricSpec::finsler_value(const SamplePoint& p) const { return p.u() * phi_at(p.reduced()); }

// ---------------------------------------------------------------------------

std::vector<double> Axis::values() const {
  if (count < 1) throw EmptyGrid("axis with no points");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  out.back() = max;
  return out;
}

std::size_t GridSpec::size() const {
  auto c = [](const Axis& a) { return a.count < 1 ? std::size_t{0} : static_cast<std::size_t>(a.count); };
  return c(x0) * c(r) * c(s_fraction) * c(z);
}

std::vector<ReducedPoint> GridSpec::points() const {
  const auto xs = x0.values();
  const auto rs = r.values();
  const auto ss = s_fraction.values();
  const auto zs = z.values();
  std::vector<ReducedPoint> out;
  out.reserve(size());
  for (double a : xs) {
    for (double b : rs) {
      for (double c : ss) {
        for (double d : zs) out.push_back({a, b, c * b, d});
      }
    }
  }
  return out;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  auto ax = [&](const char* name, const Axis& a) {
    os << name << "=[" << a.min << "," << a.max << "]x" << a.count;
  };
  ax("x0", x0);
  os << " ";
  ax("r", r);
  os << " ";
  ax("s/r", s_fraction);
  os << " ";
  ax("z", z);
  return os.str();
}

// ---------------------------------------------------------------------------

Coordinates<Jet> reduced_coordinate_jets(const ReducedPoint& p, int order) {
  JetSpace sp(reduced_variable_names(), order);
  return {Jet::variable(sp, 0, p.x0), Jet::variable(sp, 1, p.r), Jet::variable(sp, 2, p.s),
          Jet::variable(sp, 3, p.z)};
}

PhiTable phi_table(const MetricSpec& spec, const ReducedPoint& p, int order) {
  Jet j = spec.phi_jet(reduced_coordinate_jets(p, order));
  if (!(j.value() > 0.0)) {
    std::ostringstream os;
    os << "phi = " << j.value() << " at (x0, r, s, z) = (" << p.x0 << ", " << p.r << ", " << p.s << ", " << p.z
       << ")";
    throw NonPositivePhi(os.str());
  }
  return PhiTable(p, std::move(j));
}

double omega(const PhiTable& t) {
  return t.phi() - t.point().s * t.phi_s() - t.point().z * t.phi_z();
}

double lambda_(const PhiTable& t, double r, double s) {
  return omega(t) * t.phi_zz() + (r * r - s * s) * (t.phi_ss() * t.phi_zz() - t.phi_sz() * t.phi_sz());
}

// ---------------------------------------------------------------------------

ReducedJets reduce(const RawJets& raw) {
  const std::size_t n = raw.xbar.size();
  Jet rr = raw.xbar[0] * raw.xbar[0];
  Jet uu = raw.ybar[0] * raw.ybar[0];
  Jet xy = raw.xbar[0] * raw.ybar[0];
  for (std::size_t i = 1; i < n; ++i) {
    rr += raw.xbar[i] * raw.xbar[i];
    uu += raw.ybar[i] * raw.ybar[i];
    xy += raw.xbar[i] * raw.ybar[i];
  }
  Jet u = sqrt(uu);
  Jet inv_u = reciprocal(u);
  return {{raw.x0, sqrt(rr), xy * inv_u, raw.y0 * inv_u}, u};
}

Jet finsler_jet(const MetricSpec& spec, const RawJets& raw) {
  ReducedJets red = reduce(raw);
  return red.u * spec.phi_jet(red.coords);
}

RawJets y_jets(const SamplePoint& p, int order) {
  const int n = p.n();
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= n; ++a) names.push_back("y" + std::to_string(a));
  JetSpace sp(std::move(names), order);
  RawJets raw{Jet::constant(sp, p.x0), {}, Jet::variable(sp, 0, p.y0), {}};
  for (int i = 0; i < n; ++i) {
    raw.xbar.push_back(Jet::constant(sp, p.xbar[static_cast<std::size_t>(i)]));
    raw.ybar.push_back(Jet::variable(sp, i + 1, p.ybar[static_cast<std::size_t>(i)]));
  }
  return raw;
}

Eigen::MatrixXd fundamental_tensor(const MetricSpec& spec, const SamplePoint& p) {
  if (p.n() != spec.n()) throw Error("sample point dimension does not match the metric");
  Jet f = finsler_jet(spec, y_jets(p, 2));
  Jet f2 = f * f;
  const int dim = spec.n() + 1;
  Eigen::MatrixXd g(dim, dim);
  MultiIndex idx(static_cast<std::size_t>(dim), 0);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      std::fill(idx.begin(), idx.end(), 0);
      ++idx[static_cast<std::size_t>(a)];
      ++idx[static_cast<std::size_t>(b)];
      g(a, b) = g(b, a) = 0.5 * f2.partial(idx);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace {

struct PointValidity {
  bool evaluated = false;
  bool criterion = false;
  bool oracle = false;
  double phi = 0.0;
  double lambda = 0.0;
  double omega = 0.0;
  double eigen_ratio = 0.0;
};

PointValidity check_point(const MetricSpec& spec, const ReducedPoint& p) {
  PointValidity v;
  double phi_value = 0.0;
  Jet jet = Jet::constant(JetSpace(reduced_variable_names(), 2), 0.0);
  try {
    jet = spec.phi_jet(reduced_coordinate_jets(p, 2));
    phi_value = jet.value();
  } catch (const Error&) {
    return v;
  }
  v.evaluated = true;
  v.phi = phi_value;
  PhiTable t(p, jet);
  v.omega = omega(t);
  v.lambda = lambda_(t, p.r, p.s);
  v.criterion = v.phi > 0.0 && v.lambda > 0.0 && (spec.n() < 3 || v.omega > 0.0);
  try {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fundamental_tensor(spec, SamplePoint::canonical(spec.n(), p)),
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double hi = ev.maxCoeff();
    const double lo = ev.minCoeff();
    v.eigen_ratio = hi > 0.0 ? lo / hi : -1.0;
    v.oracle = hi > 0.0 && lo > kEigenRatioFloor * hi;
  } catch (const Error&) {
    v.oracle = false;
  }
  return v;
}

}  // namespace

ValidityReport validate(const MetricSpec& spec, const GridSpec& grid) {
  const auto pts = grid.points();
  if (pts.empty()) throw EmptyGrid("validation grid is empty");
  const auto results = parallel_map<PointValidity>(pts.size(), [&](std::size_t i) { return check_point(spec, pts[i]); });
  ValidityReport rep;
  rep.points = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& v = results[i];
    if (!v.evaluated) {
      ++rep.evaluation_failures;
      ++rep.criterion_failures;
      ++rep.oracle_failures;
      if (!rep.first_failure) rep.first_failure = pts[i];
      continue;
    }
    rep.min_phi = std::min(rep.min_phi, v.phi);
    rep.min_lambda = std::min(rep.min_lambda, v.lambda);
    rep.min_omega = std::min(rep.min_omega, v.omega);
    rep.min_eigen_ratio = std::min(rep.min_eigen_ratio, v.eigen_ratio);
    if (!v.criterion) ++rep.criterion_failures;
    if (!v.oracle) ++rep.oracle_failures;
    if (v.criterion != v.oracle) ++rep.disagreements;
    if ((!v.criterion || !v.oracle) && !rep.first_failure) rep.first_failure = pts[i];
  }
  return rep;
}

}  // namespace finsler
