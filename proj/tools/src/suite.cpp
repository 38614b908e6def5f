// SPDX-License-Identifier: Apache-2.0
#include "suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "corpus.hpp"
#include "finsler/characterize.hpp"
#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/parallel.hpp"
#include "finsler/psi.hpp"
#include "finsler/spray.hpp"
#include "finsler/unicorn.hpp"

namespace finsler::app {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json point_json(const ReducedPoint& p) { return Json::array({number(p.x0), number(p.r), number(p.s), number(p.z)}); }

/// Same point set for every suite that samples a metric.
std::vector<SamplePoint> sample_points(const MetricSpec& spec, std::size_t index, int count) {
  std::mt19937_64 rng(kCorpusSeed + 7919 * (index + 1));
  std::vector<SamplePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(random_point(spec.n(), rng));
  return pts;
}

/// max |a - b| / max(rel * scale, floor) over points; <= 1 means every point agrees.
struct Ratio {
  double worst = 0.0;
  double max_abs_diff = 0.0;
  std::size_t failures = 0;
  void add(const Agreement& a) {
    worst = std::max(worst, a.max_abs_diff / a.tolerance);
    max_abs_diff = std::max(max_abs_diff, a.max_abs_diff);
    if (!a.pass) ++failures;
  }
};

}  // namespace

std::vector<ThetaInput> psi_corpus_inputs() {
  std::vector<ThetaInput> out;
  for (const auto& text : psi_corpus()) out.push_back({text, parse(text), {}});
  return out;
}

SuiteResult psi_identity_suite(const std::vector<ThetaInput>& thetas, const GridSpec& grid) {
  Stopwatch sw;
  SuiteResult out;
  out.title = "Psi identities";
  std::vector<double> scalar(kScalarIdentityCount, 0.0), vector(kVectorIdentityCount, 0.0);
  const auto xs = grid.x0.values();
  const auto rs = grid.r.values();
  const auto pts = grid.points();
  std::size_t evaluations = 0;
  Json per_expr = Json::array();
  std::mt19937_64 rng(kCorpusSeed);
  const Eigen::MatrixXd rot = random_orthogonal(3, rng);
  for (const auto& in : thetas) {
    double worst = 0.0;
    for (double x0 : xs) {
      for (double r : rs) {
        SzGrid g{{grid.s_fraction.min * r, grid.s_fraction.max * r, grid.s_fraction.count}, grid.z};
        const auto rep = verify_identities(ThetaField(in.theta, in.params, x0, r), g);
        evaluations += rep.points;
        for (std::size_t k = 0; k < scalar.size(); ++k) {
          scalar[k] = std::max(scalar[k], rep.identities[k].max_residual);
          worst = std::max(worst, rep.identities[k].max_residual);
        }
      }
    }
    const auto reps = parallel_map<IdentityReport>(pts.size(), [&](std::size_t i) {
      return verify_vector_identities(in.theta, in.params, SamplePoint::canonical(3, pts[i], 1.3).rotated(rot));
    });
    for (const auto& rep : reps) {
      evaluations += rep.points;
      for (std::size_t k = 0; k < vector.size(); ++k) {
        vector[k] = std::max(vector[k], rep.identities[k].max_residual);
        worst = std::max(worst, rep.identities[k].max_residual);
      }
    }
    per_expr.push_back(Json{{"theta", in.label}, {"max_residual", number(worst)}});
  }
  for (std::size_t k = 0; k < scalar.size(); ++k)
    out.checks.push_back(CheckResult::at_most("psi scalar: " + scalar_identity_names()[k], scalar[k], kIdentityTol));
  for (std::size_t k = 0; k < vector.size(); ++k)
    out.checks.push_back(CheckResult::at_most("psi vector: " + vector_identity_names()[k], vector[k], kIdentityTol));
  out.details = Json{{"corpus", per_expr}, {"grid", grid.describe()}, {"evaluations", evaluations}};
  out.seconds = sw.seconds();
  return out;
}

SuiteResult spray_oracle_suite(const std::vector<MetricSpec>& corpus, int points) {
  Stopwatch sw;
  SuiteResult out;
  out.title = "spray oracle";
  Json per = Json::array();
  for (std::size_t m = 0; m < corpus.size(); ++m) {
    const auto& spec = corpus[m];
    const auto pts = sample_points(spec, m, points);
    const auto agreements = parallel_map<Agreement>(pts.size(), [&](std::size_t i) {
      const auto a = spray(spec, pts[i]);
      const auto b = spray_oracle(spec, pts[i]);
      return compare(a.G, b.G, kOracleRel, kOracleFloor);
    });
    Ratio ratio;
    for (const auto& a : agreements) ratio.add(a);
    out.checks.push_back(CheckResult::at_most("spray closed vs oracle (diff/tol): " + spec.name(), ratio.worst, 1.0));
    per.push_back(Json{{"metric", spec.name()},
                       {"phi", spec.phi().to_string()},
                       {"points", pts.size()},
                       {"max_abs_diff", number(ratio.max_abs_diff)},
                       {"failures", ratio.failures}});
  }
  out.details = Json{{"rel", kOracleRel}, {"floor", kOracleFloor}, {"metrics", per}};
  out.seconds = sw.seconds();
  return out;
}

std::pair<SuiteResult, SuiteResult> curvature_oracle_suite(const std::vector<MetricSpec>& corpus, int points) {
  Stopwatch sw;
  SuiteResult b, l;
  b.title = "Berwald oracle";
  l.title = "Landsberg oracle";
  Json bper = Json::array(), lper = Json::array();
  struct Row {
    Agreement b, l;
    double bsym = 0, bcon = 0, osym = 0, ocon = 0, lsym = 0, lcon = 0;
  };
  for (std::size_t m = 0; m < corpus.size(); ++m) {
    const auto& spec = corpus[m];
    const auto pts = sample_points(spec, m, points);
    const auto rows = parallel_map<Row>(pts.size(), [&](std::size_t i) {
      const auto& p = pts[i];
      const auto cc = curvature_closed(spec, p);
      const auto bo = berwald_oracle(spec, p);
      const auto lo = landsberg_from_berwald(spec, p, bo);
      const auto y = y_vector(p);
      Row r;
      r.b = compare(cc.berwald.components(), bo.components(), kOracleRel, kOracleFloor);
      r.l = compare(cc.landsberg.components(), lo.components(), kOracleRel, kOracleFloor);
      const double bs = cc.berwald.max_abs() + 1.0, os = bo.max_abs() + 1.0, ls = cc.landsberg.max_abs() + 1.0;
      r.bsym = cc.berwald.symmetry_defect() / bs;
      r.bcon = cc.berwald.contraction_defect(y) / bs;
      r.osym = bo.symmetry_defect() / os;
      r.ocon = bo.contraction_defect(y) / os;
      r.lsym = cc.landsberg.symmetry_defect() / ls;
      r.lcon = cc.landsberg.contraction_defect(y) / ls;
      return r;
    });
    Ratio br, lr;
    double bsym = 0, bcon = 0, lsym = 0, lcon = 0;
    for (const auto& r : rows) {
      br.add(r.b);
      lr.add(r.l);
      bsym = std::max({bsym, r.bsym, r.osym});
      bcon = std::max({bcon, r.bcon, r.ocon});
      lsym = std::max(lsym, r.lsym);
      lcon = std::max(lcon, r.lcon);
    }
    const std::string& n = spec.name();
    b.checks.push_back(CheckResult::at_most("Berwald closed vs oracle (diff/tol): " + n, br.worst, 1.0));
    b.checks.push_back(CheckResult::at_most("Berwald symmetry: " + n, bsym, kInvariantTol));
    b.checks.push_back(CheckResult::at_most("Berwald y-contraction: " + n, bcon, kInvariantTol));
    l.checks.push_back(CheckResult::at_most("Landsberg closed vs oracle (diff/tol): " + n, lr.worst, 1.0));
    l.checks.push_back(CheckResult::at_most("Landsberg symmetry: " + n, lsym, kInvariantTol));
    l.checks.push_back(CheckResult::at_most("Landsberg y-contraction: " + n, lcon, kInvariantTol));
    bper.push_back(Json{{"metric", n}, {"points", pts.size()}, {"max_abs_diff", number(br.max_abs_diff)},
                        {"failures", br.failures}});
    lper.push_back(Json{{"metric", n}, {"points", pts.size()}, {"max_abs_diff", number(lr.max_abs_diff)},
                        {"failures", lr.failures}});
  }
  const Json common{{"rel", kOracleRel}, {"floor", kOracleFloor}, {"invariants_normalized_by", "max_abs + 1"}};
  b.details = common;
  b.details["metrics"] = bper;
  l.details = common;
  l.details["metrics"] = lper;
  b.seconds = l.seconds = sw.seconds();
  return {b, l};
}

SuiteResult unicorn_suite(const GridSpec& grid) {
  Stopwatch sw;
  SuiteResult out;
  out.title = "unicorn reproduction";
  const auto lnb = build_unicorn(UnicornParams::derived_instance(), grid);
  const auto sweep = curvature_sweep(lnb, grid, false);
  const auto c = classify(lnb, grid);
  out.checks.push_back(CheckResult::at_most("unicorn k=exp(x0): Landsberg grid max", sweep.landsberg_max, 1e-7));
  out.checks.push_back(CheckResult::at_least("unicorn k=exp(x0): Berwald grid max", sweep.berwald_max, 1e-3));
  out.checks.push_back(
      CheckResult::equals("unicorn k=exp(x0): classify", to_string(c.verdict), to_string(Verdict::LandsbergNotBerwald)));

  const auto bw = build_unicorn(UnicornParams::derived_instance("1"), grid);
  const auto c1 = classify(bw, grid);
  const double bmax = c1.sweep ? c1.sweep->berwald_max : std::numeric_limits<double>::infinity();
  out.checks.push_back(CheckResult::equals("unicorn k=1: classify", to_string(c1.verdict), to_string(Verdict::Berwald)));
  out.checks.push_back(CheckResult::at_most("unicorn k=1: Berwald grid max", bmax, 1e-7));
  out.details = Json{{"phi", lnb.phi().to_string()},
                     {"grid", grid.describe()},
                     {"landsberg_max", number(sweep.landsberg_max)},
                     {"berwald_max", number(sweep.berwald_max)},
                     {"berwald_argmax", point_json(sweep.berwald_argmax)},
                     {"regular", c.regular},
                     {"k1_berwald_max", number(bmax)}};
  out.seconds = sw.seconds();
  return out;
}

SuiteResult probe_suite() {
  Stopwatch sw;
  SuiteResult out;
  out.title = "regularity probe";
  const auto res = regularity_probe(UnicornParams::from_alpha_beta("1", "1", "1"), 0.0, 0.5);
  out.checks.push_back(CheckResult::at_most("theta'''(0+) relative error", res.rel_error_plus(), kProbeRel));
  out.checks.push_back(CheckResult::at_most("theta'''(0-) relative error", res.rel_error_minus(), kProbeRel));
  out.details = Json{{"alpha", 1.0},
                     {"beta", 1.0},
                     {"k", 1.0},
                     {"theta_ppp_plus", number(res.theta_ppp_plus)},
                     {"theta_ppp_minus", number(res.theta_ppp_minus)},
                     {"predicted_plus", number(res.predicted_plus)},
                     {"predicted_minus", number(res.predicted_minus)},
                     {"jump", number(res.jump)}};
  out.seconds = sw.seconds();
  return out;
}

SuiteResult concordance_suite(const std::vector<MetricSpec>& corpus, const GridSpec& grid) {
  Stopwatch sw;
  SuiteResult out;
  out.title = "characterization concordance";
  Json per = Json::array();
  for (const auto& spec : corpus) {
    const auto c = concordance(spec, grid, kDefaultVanishTol);
    out.checks.push_back(CheckResult::flag("concordance: " + spec.name(), c.agree(),
                                           c.tensor_berwald ? "berwald" : (c.tensor_landsberg ? "landsberg" : "neither")));
    Json j{{"metric", spec.name()},
           {"tensor_berwald", c.tensor_berwald},
           {"psi_berwald", c.psi_berwald},
           {"fit_berwald", c.fit_berwald},
           {"tensor_landsberg", c.tensor_landsberg},
           {"tensor_berwald_max", number(c.tensor_berwald_max)},
           {"psi_max", number(c.psi_max)},
           {"fit_max", number(c.fit_max)},
           {"tensor_landsberg_max", number(c.tensor_landsberg_max)}};
    if (c.s_independent_berwald) {
      j["s_independent_berwald"] = *c.s_independent_berwald;
      j["s_independent_max"] = number(*c.s_independent_max);
    }
    if (c.pde_landsberg) {
      j["pde_landsberg"] = *c.pde_landsberg;
      j["pde_max"] = number(*c.pde_max);
    }
    per.push_back(std::move(j));
  }
  out.details = Json{{"tol", kDefaultVanishTol}, {"grid", grid.describe()}, {"metrics", per}};
  out.seconds = sw.seconds();
  return out;
}

SuiteResult anomaly_suite(const std::vector<MetricSpec>& corpus, const GridSpec& grid) {
  Stopwatch sw;
  SuiteResult out;
  out.title = "regular Landsberg metrics are Berwald";
  Json per = Json::array(), anomalies = Json::array();
  for (const auto& spec : corpus) {
    if (!spec.s_independent()) continue;
    const auto c = classify(spec, grid);
    per.push_back(Json{{"metric", spec.name()}, {"verdict", to_string(c.verdict)}, {"regular", c.regular}});
    if (c.anomaly) {
      anomalies.push_back(Json{{"metric", spec.name()},
                               {"phi", spec.phi().to_string()},
                               {"berwald_max", number(c.sweep->berwald_max)},
                               {"landsberg_max", number(c.sweep->landsberg_max)}});
    }
    out.checks.push_back(CheckResult::flag("no anomaly: " + spec.name(), !c.anomaly,
                                           to_string(c.verdict) + (c.regular ? " regular" : " non-regular")));
  }
  out.details = Json{{"grid", grid.describe()}, {"metrics", per}, {"anomalies", anomalies}};
  out.seconds = sw.seconds();
  return out;
}

std::vector<SuiteResult> selftest_suites() {
  const auto corpus = metric_corpus();
  std::vector<SuiteResult> out;
  out.push_back(psi_identity_suite(psi_corpus_inputs()));
  out.push_back(spray_oracle_suite(corpus));
  auto [b, l] = curvature_oracle_suite(corpus);
  out.push_back(std::move(b));
  out.push_back(std::move(l));
  out.push_back(unicorn_suite());
  out.push_back(probe_suite());
  const auto cc = concordance_corpus();
  out.push_back(concordance_suite(cc));
  auto scan = corpus;
  scan.insert(scan.end(), cc.begin(), cc.end());
  out.push_back(anomaly_suite(scan));
  return out;
}

}  // namespace finsler::app
