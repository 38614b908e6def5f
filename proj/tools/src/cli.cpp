// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "finsler/characterize.hpp"
#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/parallel.hpp"
#include "finsler/spray.hpp"
#include "finsler/unicorn.hpp"
#include "report.hpp"
#include "suite.hpp"

namespace finsler::app {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MetricOptions {
  std::string config;
  std::string phi;
  std::string family;
  std::vector<std::string> params;
  std::string name;
  std::optional<int> n;
};

struct GridOptions {
  std::string x0, r, s_fraction, z;
  std::optional<double> vanish_tol, oracle_tol;
};

struct UnicornOptions {
  std::string g1, g2, g3, k = "exp(x0)", alpha, beta, variant = "canonical";
  int n = 3;
};

struct SprayOptions {
  std::vector<double> point;
};

struct PsiOptions {
  std::vector<std::string> thetas;
  bool corpus = false;
};

void add_metric_options(CLI::App* sub, MetricOptions& o) {
  sub->add_option("config", o.config, "INI config file");
  sub->add_option("--phi", o.phi, "phi(x0, r, s, z) as an expression");
  sub->add_option("--family", o.family, "built-in family: euclidean | randers | unicorn");
  sub->add_option("--param", o.params, "parameter NAME=VALUE, repeatable");
  sub->add_option("--name", o.name, "metric name used in the report");
  sub->add_option("--n", o.n, "spatial dimension (default 3)")->check(CLI::PositiveNumber);
}

void add_grid_options(CLI::App* sub, GridOptions& o) {
  sub->add_option("--x0", o.x0, "x0 axis 'min,max,count'");
  sub->add_option("--r", o.r, "r axis 'min,max,count'");
  sub->add_option("--s-fraction", o.s_fraction, "s/r axis 'min,max,count'");
  sub->add_option("--z", o.z, "z axis 'min,max,count'");
  sub->add_option("--vanish-tol", o.vanish_tol, "tolerance for vanishing curvature (default 1e-7)");
  sub->add_option("--oracle-tol", o.oracle_tol, "relative tolerance for oracle agreement (default 1e-6)");
}

ParameterEnv parse_params(const std::vector<std::string>& items) {
  ParameterEnv env;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--param " + name + ": '" + item.substr(eq + 1) + "' is not a number");
    }
    try {
      env.set(name, v);
    } catch (const Error& e) {
      throw UsageError(std::string("--param: ") + e.what());
    }
  }
  return env;
}

void apply_grid(const GridOptions& o, RunConfig& cfg) {
  if (!o.x0.empty()) cfg.grid.x0 = parse_axis(o.x0, "--x0");
  if (!o.r.empty()) cfg.grid.r = parse_axis(o.r, "--r");
  if (!o.s_fraction.empty()) cfg.grid.s_fraction = parse_axis(o.s_fraction, "--s-fraction");
  if (!o.z.empty()) cfg.grid.z = parse_axis(o.z, "--z");
  if (o.vanish_tol) cfg.vanish_tol = *o.vanish_tol;
  if (o.oracle_tol) cfg.oracle_tol = *o.oracle_tol;
}

RunConfig resolve(const MetricOptions& m, const GridOptions& g) {
  const int sources = int(!m.config.empty()) + int(!m.phi.empty()) + int(!m.family.empty());
  if (sources != 1) throw UsageError("give exactly one of: a config file, --phi, --family");
  RunConfig cfg;
  if (!m.config.empty()) {
    if (!m.params.empty()) throw UsageError("--param cannot be combined with a config file");
    cfg = load_config(m.config);
    if (m.n) cfg.spec = cfg.spec->with_dimension(*m.n);
    if (!m.name.empty()) cfg.spec = MetricSpec(m.name, cfg.spec->phi(), cfg.spec->params(), cfg.spec->n());
  } else {
    const ParameterEnv params = parse_params(m.params);
    const int n = m.n.value_or(3);
    try {
      if (!m.phi.empty()) {
        cfg.phi_source = m.phi;
        cfg.spec = MetricSpec::from_text(m.name.empty() ? "custom" : m.name, m.phi, params, n);
      } else {
        cfg.phi_source = "family(" + m.family + ")";
        const auto fam = MetricSpec::from_family(m.family, params, n);
        cfg.spec = MetricSpec(m.name.empty() ? m.family : m.name, fam.phi(), fam.params(), n);
      }
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  apply_grid(g, cfg);
  return cfg;
}

Json point_json(const ReducedPoint& p) {
  return Json{{"x0", number(p.x0)}, {"r", number(p.r)}, {"s", number(p.s)}, {"z", number(p.z)}};
}

Json spec_json(const RunConfig& cfg) {
  const auto& s = *cfg.spec;
  Json params = Json::object();
  for (const auto& [k, v] : s.params().values()) params[k] = number(v);
  return Json{{"metric",
               {{"name", s.name()},
                {"phi", s.phi().to_string()},
                {"source", cfg.phi_source},
                {"n", s.n()},
                {"params", params},
                {"s_independent", s.s_independent()}}},
              {"grid", cfg.grid.describe()},
              {"tolerances", {{"vanish_tol", number(cfg.vanish_tol)}, {"oracle_tol", number(cfg.oracle_tol)}}}};
}

Json validity_json(const ValidityReport& v) {
  return Json{{"points", v.points},
              {"pass", v.pass()},
              {"criterion_failures", v.criterion_failures},
              {"oracle_failures", v.oracle_failures},
              {"disagreements", v.disagreements},
              {"evaluation_failures", v.evaluation_failures},
              {"min_phi", number(v.min_phi)},
              {"min_omega", number(v.min_omega)},
              {"min_lambda", number(v.min_lambda)},
              {"min_eigen_ratio", number(v.min_eigen_ratio)},
              {"first_failure", v.first_failure ? point_json(*v.first_failure) : Json(nullptr)}};
}

template <std::size_t N>
Json family_json(const std::array<std::string, N>& names, const std::array<double, N>& values) {
  Json j = Json::object();
  for (std::size_t i = 0; i < N; ++i) j[names[i]] = number(values[i]);
  return j;
}

Json sweep_json(const CurvatureSweep& s) {
  Json j{{"points", s.points},
         {"berwald_max", number(s.berwald_max)},
         {"berwald_argmax", point_json(s.berwald_argmax)},
         {"berwald_family_max", family_json(berwald_family_names(), s.berwald_family)},
         {"landsberg_max", number(s.landsberg_max)},
         {"landsberg_argmax", point_json(s.landsberg_argmax)},
         {"landsberg_family_max", family_json(landsberg_family_names(), s.landsberg_family)},
         {"symmetry_defect", number(s.symmetry_defect)},
         {"contraction_defect", number(s.contraction_defect)}};
  if (s.with_oracle) {
    j["berwald_oracle_diff"] = number(s.berwald_oracle_diff);
    j["landsberg_oracle_diff"] = number(s.landsberg_oracle_diff);
    j["berwald_family_oracle_diff"] = family_json(berwald_family_names(), s.berwald_family_oracle_diff);
    j["landsberg_family_oracle_diff"] = family_json(landsberg_family_names(), s.landsberg_family_oracle_diff);
  }
  return j;
}

Json residual_json(const ResidualReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"name", e.name}, {"max_residual", number(e.max_residual)}, {"argmax", point_json(e.argmax)}});
  return Json{{"points", r.points}, {"max_residual", number(r.max_residual())}, {"entries", entries}};
}

Json probe_json(const ThetaProbe& p) {
  return Json{{"x0", number(p.x0)},           {"r", number(p.r)},
              {"theta0", number(p.theta0_plus)}, {"jump1", number(p.jump1())},
              {"jump3", number(p.jump3())},    {"smooth", p.smooth()}};
}

// ---------------------------------------------------------------------------

void cmd_validate(const RunConfig& cfg, Report& rep) {
  const auto v = validate(*cfg.spec, cfg.grid);
  rep.add(CheckResult::flag("phi / Omega / Lambda criterion", v.criterion_pass(),
                            std::to_string(v.criterion_failures) + " failing points"));
  rep.add(CheckResult::flag("Hessian oracle", v.oracle_pass(), std::to_string(v.oracle_failures) + " failing points"));
  rep.add(CheckResult::flag("criterion agrees with Hessian oracle", v.disagreements == 0,
                            std::to_string(v.disagreements) + " disagreements"));
  rep.details["validity"] = validity_json(v);
  rep.verdict = v.pass() ? "VALID" : "INVALID";
}

void cmd_spray(const RunConfig& cfg, const SprayOptions& o, Report& rep) {
  const auto& spec = *cfg.spec;
  std::mt19937_64 rng(kCorpusSeed);
  const Eigen::MatrixXd rot = random_orthogonal(spec.n(), rng);
  const auto pts = cfg.grid.points();
  const auto agreements = parallel_map<Agreement>(pts.size(), [&](std::size_t i) {
    const auto p = SamplePoint::canonical(spec.n(), pts[i]).rotated(rot);
    return compare(spray(spec, p).G, spray_oracle(spec, p).G, cfg.oracle_tol, 1e-10);
  });
  double worst = 0.0, max_diff = 0.0;
  std::size_t failures = 0;
  for (const auto& a : agreements) {
    worst = std::max(worst, a.max_abs_diff / a.tolerance);
    max_diff = std::max(max_diff, a.max_abs_diff);
    if (!a.pass) ++failures;
  }
  rep.add(CheckResult::at_most("closed spray vs oracle (diff/tol)", worst, 1.0));

  const ReducedPoint ref = o.point.empty() ? ReducedPoint{0.0, 0.5, 0.1, 1.0}
                                           : ReducedPoint{o.point[0], o.point[1], o.point[2], o.point[3]};
  const auto q = spray_quantities(phi_table(spec, ref), spec.s_independent());
  const auto p = SamplePoint::canonical(spec.n(), ref);
  const auto closed = spray(spec, p), oracle = spray_oracle(spec, p);
  Json G = Json::array(), Go = Json::array();
  for (double v : closed.G) G.push_back(number(v));
  for (double v : oracle.G) Go.push_back(number(v));
  Json quantities{{"N", number(q.N)},      {"W", number(q.W)},           {"L", number(q.L)},
                  {"U", number(q.U)},      {"V", number(q.V)},           {"varphi", number(q.varphi)},
                  {"p1", number(q.p1)},    {"p2", number(q.p2)},         {"omega", number(q.omega)},
                  {"lambda", number(q.lambda)}};
  if (q.corollary_deviation) quantities["corollary_deviation"] = number(*q.corollary_deviation);
  rep.details = Json{{"points", pts.size()},
                     {"max_abs_diff", number(max_diff)},
                     {"failures", failures},
                     {"reference_point", point_json(ref)},
                     {"quantities", quantities},
                     {"G_closed", G},
                     {"G_oracle", Go}};
  rep.verdict = failures == 0 ? "AGREE" : "DISAGREE";
}

void cmd_tensor(const RunConfig& cfg, bool berwald, Report& rep) {
  const auto s = curvature_sweep(*cfg.spec, cfg.grid, true, cfg.oracle_tol);
  const std::string what = berwald ? "Berwald" : "Landsberg";
  const double diff = berwald ? s.berwald_oracle_diff : s.landsberg_oracle_diff;
  rep.add(CheckResult::flag(what + " closed form vs oracle", berwald ? s.berwald_oracle_pass : s.landsberg_oracle_pass,
                            "max |diff| " + std::to_string(diff)));
  rep.add(CheckResult::at_most(what + " symmetry defect", s.symmetry_defect, kInvariantTol));
  rep.add(CheckResult::at_most(what + " y-contraction defect", s.contraction_defect, kInvariantTol));
  rep.details["sweep"] = sweep_json(s);
  const double m = berwald ? s.berwald_max : s.landsberg_max;
  rep.details["max_abs"] = number(m);
  rep.verdict = m <= cfg.vanish_tol ? "VANISHES" : "NONZERO";
}

void cmd_classify(const RunConfig& cfg, Report& rep) {
  const auto c = classify(*cfg.spec, cfg.grid, cfg.vanish_tol);
  rep.add(CheckResult::flag("metric valid on grid", c.validity.pass()));
  rep.details["validity"] = validity_json(c.validity);
  if (c.validity.pass()) {
    rep.add(CheckResult::flag("curvature evaluated", c.sweep.has_value(), c.curvature_error));
    const auto cc = concordance(*cfg.spec, cfg.grid, cfg.vanish_tol);
    rep.add(CheckResult::flag("characterization paths agree", cc.agree()));
    Json j{{"tensor_berwald", cc.tensor_berwald},     {"psi_berwald", cc.psi_berwald},
           {"fit_berwald", cc.fit_berwald},           {"tensor_landsberg", cc.tensor_landsberg},
           {"tensor_berwald_max", number(cc.tensor_berwald_max)}, {"psi_max", number(cc.psi_max)},
           {"fit_max", number(cc.fit_max)},           {"tensor_landsberg_max", number(cc.tensor_landsberg_max)}};
    if (cc.s_independent_berwald) {
      j["s_independent_berwald"] = *cc.s_independent_berwald;
      j["s_independent_max"] = number(*cc.s_independent_max);
    }
    if (cc.pde_landsberg) {
      j["pde_landsberg"] = *cc.pde_landsberg;
      j["pde_max"] = number(*cc.pde_max);
    }
    rep.details["concordance"] = j;
  }
  rep.add(CheckResult::flag("no regular Landsberg non-Berwald metric", !c.anomaly,
                            c.anomaly ? "ANOMALY: regular s-independent metric is Landsberg but not Berwald" : ""));
  if (c.sweep) rep.details["sweep"] = sweep_json(*c.sweep);
  rep.details["s_independent"] = c.s_independent;
  rep.details["regular"] = c.regular;
  rep.details["anomaly"] = c.anomaly;
  Json probes = Json::array();
  for (const auto& p : c.probes) probes.push_back(probe_json(p));
  rep.details["probes"] = probes;
  rep.verdict = to_string(c.verdict);
}

void cmd_psi(const RunConfig* cfg, const PsiOptions& o, const GridSpec& grid, Report& rep) {
  std::vector<ThetaInput> thetas;
  if (!o.thetas.empty()) {
    for (const auto& t : o.thetas) {
      try {
        thetas.push_back({t, parse(t), {}});
      } catch (const Error& e) {
        throw ConfigError(std::string("--theta: ") + e.what());
      }
    }
  } else if (cfg) {
    thetas.push_back({cfg->spec->name(), cfg->spec->phi(), cfg->spec->params()});
  } else {
    thetas = psi_corpus_inputs();
  }
  auto res = psi_identity_suite(thetas, grid);
  rep.add(res.checks);
  rep.details = res.details;
  rep.verdict = res.pass() ? "IDENTITIES_HOLD" : "IDENTITY_VIOLATED";
}

void cmd_unicorn(const UnicornOptions& o, const RunConfig& cfg, Report& rep) {
  const bool g_mode = !o.g1.empty() || !o.g2.empty() || !o.g3.empty();
  const bool ab_mode = !o.alpha.empty() || !o.beta.empty();
  if (g_mode && ab_mode) throw UsageError("--g1/--g2/--g3 and --alpha/--beta are exclusive");
  if (g_mode && (o.g1.empty() || o.g2.empty() || o.g3.empty())) throw UsageError("--g1, --g2 and --g3 go together");
  if (ab_mode && (o.alpha.empty() || o.beta.empty())) throw UsageError("--alpha and --beta go together");

  UnicornParams params;
  try {
    const auto variant = unicorn_variant_from_string(o.variant);
    if (ab_mode) {
      params = UnicornParams::from_alpha_beta(o.k, o.alpha, o.beta, variant);
    } else if (g_mode) {
      params = UnicornParams::from_g(o.k, o.g1, o.g2, o.g3, variant);
    } else {
      params = UnicornParams::derived_instance(o.k, variant);
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  const GridSpec& grid = cfg.grid;
  std::optional<MetricSpec> spec;
  try {
    spec = build_unicorn(params, grid, o.n);
  } catch (const NegativeDelta& e) {
    throw ConfigError(e.what());
  } catch (const ZeroG2& e) {
    throw ConfigError(e.what());
  } catch (const DegenerateAlphaBeta& e) {
    throw ConfigError(e.what());
  }
  Json coeffs{{"mode", params.mode == UnicornParams::Mode::G ? "g" : "alpha-beta"},
              {"k", params.k.to_string()},
              {"g1", params.g1_expr().to_string()},
              {"g2", params.g2_expr().to_string()},
              {"g3", params.g3_expr().to_string()},
              {"alpha", params.alpha_expr().to_string()},
              {"beta", params.beta_expr().to_string()},
              {"variant", to_string(params.variant)}};
  rep.spec = Json{{"metric", {{"name", spec->name()}, {"phi", spec->phi().to_string()}, {"n", spec->n()}}},
                  {"unicorn", coeffs},
                  {"grid", grid.describe()},
                  {"tolerances", {{"vanish_tol", number(cfg.vanish_tol)}, {"oracle_tol", number(cfg.oracle_tol)}}}};

  // Conditions on the coefficients.
  std::optional<UnicornConditions> cond;
  try {
    cond = check_conditions(params, grid);
    rep.details["conditions"] = residual_json(cond->residuals);
    rep.details["conditions"]["min_delta"] = number(cond->min_delta);
    rep.details["conditions"]["min_alpha"] = number(cond->min_alpha);
  } catch (const Error& e) {
    rep.details["conditions"] = Json{{"error", e.what()}};
  }

  // Curvature.
  const auto sweep = curvature_sweep(*spec, grid, true, cfg.oracle_tol);
  rep.add(CheckResult::flag("Berwald closed form vs oracle", sweep.berwald_oracle_pass));
  rep.add(CheckResult::flag("Landsberg closed form vs oracle", sweep.landsberg_oracle_pass));
  rep.details["curvature"] = sweep_json(sweep);
  const bool tensor_landsberg = sweep.landsberg_max <= cfg.vanish_tol;
  const bool tensor_berwald = sweep.berwald_max <= cfg.vanish_tol;
  if (cond) {
    const bool landsberg_conditions = cond->landsberg_max() <= cfg.vanish_tol;
    rep.details["conditions"]["landsberg_conditions_hold"] = landsberg_conditions;
    if (params.variant == UnicornVariant::Canonical) {
      rep.add(CheckResult::flag("Landsberg conditions agree with Landsberg tensor",
                                landsberg_conditions == tensor_landsberg,
                                std::string("conditions ") + (landsberg_conditions ? "hold" : "fail") + ", tensor " +
                                    (tensor_landsberg ? "vanishes" : "nonzero")));
    }
    const bool printed = cond->berwald_max() <= cfg.vanish_tol;
    const bool factor_one = cond->berwald_factor_one_max() <= cfg.vanish_tol;
    rep.details["conditions"]["berwald"] = Json{
        {"printed_max", number(cond->berwald_max())},
        {"printed_holds", printed},
        {"printed_agrees_with_tensor", !landsberg_conditions || printed == tensor_berwald},
        {"factor_one_max", number(cond->berwald_factor_one_max())},
        {"factor_one_holds", factor_one},
        {"factor_one_agrees_with_tensor", !landsberg_conditions || factor_one == tensor_berwald}};
  }

  // Classification.
  const auto c = classify(*spec, grid, cfg.vanish_tol);
  rep.details["validity"] = validity_json(c.validity);
  rep.details["regular"] = c.regular;
  rep.details["anomaly"] = c.anomaly;

  // Regularity probes at every (x0, r) node.
  Json probes = Json::array();
  double worst = 0.0;
  for (double x0 : grid.x0.values()) {
    for (double r : grid.r.values()) {
      try {
        const auto p = regularity_probe(params, x0, r);
        worst = std::max({worst, p.rel_error_plus(), p.rel_error_minus()});
        probes.push_back(Json{{"x0", number(x0)},
                              {"r", number(r)},
                              {"alpha", number(p.alpha)},
                              {"beta", number(p.beta)},
                              {"k", number(p.k)},
                              {"theta_ppp_plus", number(p.theta_ppp_plus)},
                              {"predicted_plus", number(p.predicted_plus)},
                              {"theta_ppp_minus", number(p.theta_ppp_minus)},
                              {"predicted_minus", number(p.predicted_minus)},
                              {"jump", number(p.jump)},
                              {"theta0", number(p.theta0_direct)},
                              {"theta0_predicted", number(p.theta0_predicted)}});
      } catch (const Error& e) {
        worst = std::numeric_limits<double>::infinity();
        probes.push_back(Json{{"x0", number(x0)}, {"r", number(r)}, {"error", e.what()}});
      }
    }
  }
  rep.add(CheckResult::at_most("theta''' one-sided limits vs prediction (relative)", worst, kProbeRel));
  rep.details["regularity"] = probes;

  const auto vc = variant_consistency(params, grid, cfg.vanish_tol);
  auto variant_json = [](const VariantResult& v) {
    Json j{{"variant", to_string(v.variant)}, {"landsberg_vanishes", v.landsberg_vanishes}};
    j["landsberg_max"] = v.landsberg_max ? number(*v.landsberg_max) : Json(nullptr);
    j["berwald_max"] = v.berwald_max ? number(*v.berwald_max) : Json(nullptr);
    if (!v.error.empty()) j["error"] = v.error;
    return j;
  };
  rep.details["variants"] = Json{{"canonical", variant_json(vc.canonical)},
                                 {"intro", variant_json(vc.intro)},
                                 {"radicand_offset", number(vc.radicand_offset)},
                                 {"landsberg_vanishes_for", vc.vanishing()}};
  rep.verdict = to_string(c.verdict);
}

void cmd_selftest(bool timing, Report& rep) {
  const auto suites = selftest_suites();
  Json blocks = Json::array();
  bool anomaly = false;
  for (const auto& s : suites) {
    rep.add(s.checks);
    Json b{{"title", s.title}, {"pass", s.pass()}, {"details", s.details}};
    if (timing) b["seconds"] = number(s.seconds);
    blocks.push_back(std::move(b));
    if (s.details.contains("anomalies") && !s.details["anomalies"].empty()) anomaly = true;
  }
  rep.details["suites"] = blocks;
  rep.verdict = anomaly ? "ANOMALY" : (rep.pass() ? "HEALTHY" : "UNHEALTHY");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification toolkit for Finsler metrics F = |ybar| phi(x0, r, s, z)", "finsler"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  unsigned threads = 0;
  bool timing = false;
  app.add_option("--format", format, "output format: text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--threads", threads, "worker threads (default: FINSLER_THREADS, then hardware)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "include wall times in the report");

  MetricOptions metric;
  GridOptions grid;
  SprayOptions spray_opts;
  PsiOptions psi_opts;
  UnicornOptions uni;

  auto* validate_cmd = app.add_subcommand("validate", "check the positive-definiteness criterion on a grid");
  auto* spray_cmd = app.add_subcommand("spray", "closed-form spray vs raw-coordinate oracle");
  auto* berwald_cmd = app.add_subcommand("berwald", "Berwald tensor sweep with oracle comparison");
  auto* landsberg_cmd = app.add_subcommand("landsberg", "Landsberg tensor sweep with oracle comparison");
  auto* classify_cmd = app.add_subcommand("classify", "classify as BERWALD, LANDSBERG_NOT_BERWALD, NON_LANDSBERG");
  auto* psi_cmd = app.add_subcommand("psi-test", "Psi-operator identities");
  auto* unicorn_cmd = app.add_subcommand("unicorn", "build and check a member of the unicorn family");
  auto* selftest_cmd = app.add_subcommand("selftest", "identity suite, oracle agreements and unicorn checks");

  for (auto* sub : {validate_cmd, spray_cmd, berwald_cmd, landsberg_cmd, classify_cmd, psi_cmd}) {
    add_metric_options(sub, metric);
    add_grid_options(sub, grid);
  }
  spray_cmd->add_option("--point", spray_opts.point, "reference point x0 r s z for the reported quantities")
      ->expected(4);
  psi_cmd->add_option("--theta", psi_opts.thetas, "Theta(x0, r, s, z) to test, repeatable");

  add_grid_options(unicorn_cmd, grid);
  unicorn_cmd->add_option("--g1", uni.g1, "g1(x0, r)");
  unicorn_cmd->add_option("--g2", uni.g2, "g2(x0, r)");
  unicorn_cmd->add_option("--g3", uni.g3, "g3(x0, r)");
  unicorn_cmd->add_option("--alpha", uni.alpha, "alpha(x0, r)");
  unicorn_cmd->add_option("--beta", uni.beta, "beta(x0, r)");
  unicorn_cmd->add_option("--k", uni.k, "k(x0), default exp(x0)");
  unicorn_cmd->add_option("--variant", uni.variant, "canonical | intro")
      ->check(CLI::IsMember({"canonical", "canonical-form", "intro", "intro-form"}));
  unicorn_cmd->add_option("--n", uni.n, "spatial dimension (default 3)")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }

  if (threads > 0) set_thread_count(threads);
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  CLI::App* sub = app.get_subcommands().front();
  rep.command = sub->get_name();
  try {
    if (sub == selftest_cmd) {
      cmd_selftest(timing, rep);
    } else if (sub == unicorn_cmd) {
      RunConfig cfg;
      apply_grid(grid, cfg);
      rep.options = Json{{"variant", uni.variant}};
      cmd_unicorn(uni, cfg, rep);
    } else if (sub == psi_cmd && metric.config.empty() && metric.phi.empty() && metric.family.empty()) {
      RunConfig cfg;
      apply_grid(grid, cfg);
      rep.spec = Json{{"grid", cfg.grid.describe()}};
      cmd_psi(nullptr, psi_opts, cfg.grid, rep);
    } else {
      const RunConfig cfg = resolve(metric, grid);
      rep.options = Json{{"config", metric.config.empty() ? Json(nullptr) : Json(metric.config)}};
      rep.spec = spec_json(cfg);
      if (sub == validate_cmd) cmd_validate(cfg, rep);
      if (sub == spray_cmd) cmd_spray(cfg, spray_opts, rep);
      if (sub == berwald_cmd) cmd_tensor(cfg, true, rep);
      if (sub == landsberg_cmd) cmd_tensor(cfg, false, rep);
      if (sub == classify_cmd) cmd_classify(cfg, rep);
      if (sub == psi_cmd) cmd_psi(&cfg, psi_opts, cfg.grid, rep);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    rep.add(CheckResult::flag("evaluation", false, e.what()));
    rep.verdict = "ERROR";
    err << "error: " << e.what() << "\n";
  }
  if (timing) rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write(rep, format_from_string(format), out);
  if (rep.verdict == "ANOMALY") err << "anomaly: a regular s-independent metric classified as LANDSBERG_NOT_BERWALD\n";
  return rep.pass() ? kExitPass : kExitCheckFailed;
}

}  // namespace finsler::app
