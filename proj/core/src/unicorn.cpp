// SPDX-License-Identifier: Apache-2.0
#include "finsler/unicorn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "finsler/curvature.hpp"
#include "finsler/error.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

std::string to_string(UnicornVariant v) {
  return v == UnicornVariant::Canonical ? "canonical" : "intro";
}

UnicornVariant unicorn_variant_from_string(std::string_view name) {
  if (name == "canonical" || name == "canonical-form") return UnicornVariant::Canonical;
  if (name == "intro" || name == "intro-form") return UnicornVariant::Intro;
  throw InvalidFamilyParameter("unknown unicorn variant '" + std::string(name) + "'");
}

namespace {

const std::set<std::string> kSlots{"K", "G1", "G2", "G3", "A", "B"};

Expression coefficient(std::string_view text, const char* what, bool allow_r) {
  Expression e = parse(text);
  if (e.depends_on(Variable::S) || e.depends_on(Variable::Z) || (!allow_r && e.depends_on(Variable::R)))
    throw InvalidFamilyParameter(std::string(what) + " = " + std::string(text) + " depends on a forbidden variable");
  return e;
}

Expression fill(std::string_view tmpl, const std::map<std::string, Expression>& slots) {
  return parse(tmpl, kSlots).substitute(slots);
}

Coordinates<double> node(double x0, double r) { return {x0, r, 0.0, 1.0}; }

struct Node {
  double x0, r;
};

std::vector<Node> nodes_of(const GridSpec& grid) {
  const auto xs = grid.x0.values();
  const auto rs = grid.r.values();
  if (xs.empty() || rs.empty()) throw EmptyGrid("unicorn checks need at least one (x0, r) node");
  std::vector<Node> out;
  out.reserve(xs.size() * rs.size());
  for (double x : xs)
    for (double r : rs) out.push_back({x, r});
  return out;
}

std::string at(const Node& n) {
  std::ostringstream os;
  os << " at (x0, r) = (" << n.x0 << ", " << n.r << ")";
  return os.str();
}

}  // namespace

UnicornParams UnicornParams::from_g(std::string_view k, std::string_view g1, std::string_view g2,
                                    std::string_view g3, UnicornVariant variant) {
  UnicornParams p;
  p.mode = Mode::G;
  p.k = coefficient(k, "k", true);
  p.g1 = coefficient(g1, "g1", true);
  p.g2 = coefficient(g2, "g2", true);
  p.g3 = coefficient(g3, "g3", true);
  p.variant = variant;
  return p;
}

UnicornParams UnicornParams::from_alpha_beta(std::string_view k, std::string_view alpha, std::string_view beta,
                                             UnicornVariant variant) {
  UnicornParams p;
  p.mode = Mode::AlphaBeta;
  p.k = coefficient(k, "k", true);
  p.alpha = coefficient(alpha, "alpha", true);
  p.beta = coefficient(beta, "beta", true);
  p.variant = variant;
  return p;
}

UnicornParams UnicornParams::derived_instance(std::string_view k, UnicornVariant variant) {
  return from_g(k, "exp(2*r)", "exp(r)/sqrt(2)", "1", variant);
}

UnicornParams UnicornParams::with_variant(UnicornVariant v) const {
  UnicornParams p = *this;
  p.variant = v;
  return p;
}

Expression UnicornParams::g1_expr() const { return mode == Mode::G ? g1 : Expression::literal(1.0); }
Expression UnicornParams::g2_expr() const { return mode == Mode::G ? g2 : fill("A*B", {{"A", alpha}, {"B", beta}}); }
Expression UnicornParams::g3_expr() const {
  return mode == Mode::G ? g3 : fill("A^2*(1+B^2)", {{"A", alpha}, {"B", beta}});
}
Expression UnicornParams::delta_expr() const {
  return fill("G1*G3-G2^2", {{"G1", g1_expr()}, {"G2", g2_expr()}, {"G3", g3_expr()}});
}
Expression UnicornParams::alpha_expr() const {
  return mode == Mode::AlphaBeta ? alpha : fill("sqrt(G1*G3-G2^2)/G1", {{"G1", g1}, {"G2", g2}, {"G3", g3}});
}
Expression UnicornParams::beta_expr() const {
  return mode == Mode::AlphaBeta ? beta : fill("G2/sqrt(G1*G3-G2^2)", {{"G1", g1}, {"G2", g2}, {"G3", g3}});
}

std::string UnicornParams::phi_text() const {
  if (variant == UnicornVariant::Canonical) {
    return fill("K*sqrt((z+A*B)^2+A^2)*exp(B*arctan((z+A*B)/A))", {{"K", k}, {"A", alpha_expr()}, {"B", beta_expr()}})
        .to_string();
  }
  return fill("K*sqrt((1/G1)*(G1*z^2+2*G2*z+2*G3))*exp((G2/sqrt(G1*G3-G2^2))*arctan((G1*z+G2)/sqrt(G1*G3-G2^2)))",
              {{"K", k}, {"G1", g1_expr()}, {"G2", g2_expr()}, {"G3", g3_expr()}})
      .to_string();
}

MetricSpec unicorn_metric(const UnicornParams& params, int n) {
  return MetricSpec::from_text("unicorn-" + to_string(params.variant), params.phi_text(), {}, n);
}

MetricSpec build_unicorn(const UnicornParams& params, const GridSpec& grid, int n) {
  for (const Node& nd : nodes_of(grid)) {
    const auto c = node(nd.x0, nd.r);
    if (params.mode == UnicornParams::Mode::G) {
      if (evaluate(params.g2, c) == 0.0) throw ZeroG2("g2 = 0" + at(nd));
    }
    const double delta = evaluate(params.delta_expr(), c);
    if (!(delta > 0.0)) throw NegativeDelta("Delta = " + std::to_string(delta) + at(nd));
    const double alpha = evaluate(params.alpha_expr(), c);
    if (!(alpha > 0.0)) throw DegenerateAlphaBeta("alpha = " + std::to_string(alpha) + at(nd));
  }
  return unicorn_metric(params, n);
}

double UnicornConditions::landsberg_max() const {
  const auto& e = residuals.entries;
  return std::max({e[kBetaR].max_residual, e[kRatioR].max_residual, e[kKR].max_residual});
}

double UnicornConditions::berwald_max() const {
  return std::max(residuals.entries[kBetaX0].max_residual, residuals.entries[kBerwaldK].max_residual);
}

double UnicornConditions::berwald_factor_one_max() const {
  return std::max(residuals.entries[kBetaX0].max_residual, residuals.entries[kBerwaldKFactorOne].max_residual);
}

UnicornConditions check_conditions(const UnicornParams& params, const GridSpec& grid) {
  static const std::vector<std::string> names{"[g2/sqrt(Delta)]_r",
                                              "[g2^2/(g1 g3)]_r",
                                              "k_r",
                                              "[g2/sqrt(Delta)]_x0",
                                              "[g3/g2]_x0 + 2 (k'/k) [g3/g2]",
                                              "[g3/g2]_x0 + (k'/k) [g3/g2]"};
  const auto nodes = nodes_of(grid);
  const Expression g1e = params.g1_expr(), g2e = params.g2_expr(), g3e = params.g3_expr();

  struct Row {
    std::array<double, 6> v{};
    double delta = 0.0, alpha = 0.0;
  };
  const auto rows = parallel_map<Row>(nodes.size(), [&](std::size_t i) {
    const Node& nd = nodes[i];
    const auto c = reduced_coordinate_jets({nd.x0, nd.r, 0.0, 1.0}, 1);
    const Jet g1 = eval_jet(g1e, c), g2 = eval_jet(g2e, c), g3 = eval_jet(g3e, c), k = eval_jet(params.k, c);
    const Jet delta = g1 * g3 - g2 * g2;
    if (!(delta.value() > 0.0)) throw NegativeDelta("Delta = " + std::to_string(delta.value()) + at(nd));
    if (g2.value() == 0.0) throw ZeroG2("g2 = 0" + at(nd));
    const Jet beta = g2 / sqrt(delta);
    const Jet ratio = g2 * g2 / (g1 * g3);
    const Jet q = g3 / g2;
    const MultiIndex dx{1, 0, 0, 0}, dr{0, 1, 0, 0};
    const double kk = k.partial(dx) / k.value();
    Row row;
    row.v = {std::fabs(beta.partial(dr)),
             std::fabs(ratio.partial(dr)),
             std::fabs(k.partial(dr)),
             std::fabs(beta.partial(dx)),
             std::fabs(q.partial(dx) + 2.0 * kk * q.value()),
             std::fabs(q.partial(dx) + kk * q.value())};
    row.delta = delta.value();
    row.alpha = std::sqrt(delta.value()) / g1.value();
    return row;
  });

  UnicornConditions out;
  out.residuals.points = nodes.size();
  out.residuals.grid = grid.describe();
  out.min_delta = std::numeric_limits<double>::infinity();
  out.min_alpha = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < names.size(); ++j) {
    ResidualEntry e{names[j], 0.0, {nodes.front().x0, nodes.front().r, 0.0, 1.0}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double v = rows[i].v[j];
      if (v > e.max_residual || std::isnan(v)) {
        e.max_residual = v;
        e.argmax = {nodes[i].x0, nodes[i].r, 0.0, 1.0};
        if (std::isnan(v)) break;
      }
    }
    out.residuals.entries.push_back(std::move(e));
  }
  for (const Row& row : rows) {
    out.min_delta = std::min(out.min_delta, row.delta);
    out.min_alpha = std::min(out.min_alpha, row.alpha);
  }
  return out;
}

double RegularityProbeResult::rel_error_plus() const {
  return std::fabs(theta_ppp_plus - predicted_plus) / std::max(1.0, std::fabs(predicted_plus));
}

double RegularityProbeResult::rel_error_minus() const {
  return std::fabs(theta_ppp_minus - predicted_minus) / std::max(1.0, std::fabs(predicted_minus));
}

bool RegularityProbeResult::matches(double rel) const {
  return rel_error_plus() <= rel && rel_error_minus() <= rel;
}

RegularityProbeResult regularity_probe(const UnicornParams& params, double x0, double r, double h) {
  const auto c = node(x0, r);
  RegularityProbeResult out;
  out.x0 = x0;
  out.r = r;
  out.alpha = evaluate(params.alpha_expr(), c);
  out.beta = evaluate(params.beta_expr(), c);
  out.k = evaluate(params.k, c);
  if (!(out.alpha > 0.0) || !std::isfinite(out.alpha)) {
    throw DegenerateAlphaBeta("alpha = " + std::to_string(out.alpha) + at({x0, r}));
  }
  const MetricSpec spec = unicorn_metric(params.with_variant(UnicornVariant::Canonical));
  const ThetaProbe tp = theta_probe(spec, x0, r, h);
  out.theta_ppp_plus = tp.d3_plus;
  out.theta_ppp_minus = tp.d3_minus;
  out.theta_p_plus = tp.d1_plus;
  out.theta_p_minus = tp.d1_minus;
  out.jump = tp.jump3();
  out.theta0_fd = tp.theta0_plus;
  out.theta0_direct = kThetaDirectT * spec.phi_at({x0, r, 0.0, 1.0 / kThetaDirectT});

  const double a = out.alpha, b = out.beta;
  const double scale = a * a * (1.0 + b * b) * out.k * std::exp(b * std::numbers::pi / 2.0);
  out.predicted_plus = scale * (-4.0 * a * b);
  out.predicted_minus = scale * (4.0 * a * b);
  out.predicted_jump = out.predicted_plus - out.predicted_minus;
  out.theta0_predicted = out.k * std::exp(b * std::numbers::pi / 2.0);
  return out;
}

std::string VariantConsistency::vanishing() const {
  if (canonical.landsberg_vanishes && intro.landsberg_vanishes) return "both";
  if (canonical.landsberg_vanishes) return "canonical";
  if (intro.landsberg_vanishes) return "intro";
  return "neither";
}

VariantConsistency variant_consistency(const UnicornParams& params, const GridSpec& grid, double tol) {
  VariantConsistency out;
  out.tol = tol;
  auto run = [&](UnicornVariant v) {
    VariantResult res;
    res.variant = v;
    try {
      const auto sweep = curvature_sweep(unicorn_metric(params.with_variant(v)), grid, false);
      res.landsberg_max = sweep.landsberg_max;
      res.berwald_max = sweep.berwald_max;
      res.landsberg_vanishes = sweep.landsberg_max <= tol;
    } catch (const Error& e) {
      res.error = e.what();
    }
    return res;
  };
  out.canonical = run(UnicornVariant::Canonical);
  out.intro = run(UnicornVariant::Intro);

  const Expression g1 = params.g1_expr(), g3 = params.g3_expr();
  for (const Node& nd : nodes_of(grid)) {
    const auto c = node(nd.x0, nd.r);
    out.radicand_offset = std::max(out.radicand_offset, std::fabs(evaluate(g3, c) / evaluate(g1, c)));
  }
  return out;
}

}  // namespace finsler
