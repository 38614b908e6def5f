// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file unicorn.hpp
 * @brief The s-independent Landsberg family
 *   phi = k sqrt(zeta^2 + alpha^2) exp(beta arctan(zeta / alpha)),  zeta = z + alpha beta,
 * its coefficient conditions, and the one-sided probe of theta(t) = |t| phi(x0, r, 1/|t|).
 *
 * Parameters come either as g1, g2, g3 (with Delta = g1 g3 - g2^2,
 * alpha = sqrt(Delta) / g1, beta = g2 / sqrt(Delta)) or directly as alpha, beta;
 * the latter corresponds to g1 = 1, g2 = alpha beta, g3 = alpha^2 (1 + beta^2).
 */

#include <optional>
#include <string>
#include <string_view>

#include "finsler/characterize.hpp"
#include "finsler/expression.hpp"
#include "finsler/metric.hpp"

namespace finsler {

enum class UnicornVariant {
  Canonical,  ///< k sqrt(zeta^2 + alpha^2) exp(beta arctan(zeta / alpha))
  Intro,      ///< k sqrt((g1 z^2 + 2 g2 z + 2 g3) / g1) exp(beta arctan((g1 z + g2) / sqrt(Delta)))
};
std::string to_string(UnicornVariant v);
/// Accepts "canonical" / "canonical-form" and "intro" / "intro-form".
UnicornVariant unicorn_variant_from_string(std::string_view name);

struct UnicornParams {
  enum class Mode { G, AlphaBeta };

  Mode mode = Mode::G;
  Expression k = Expression::literal(1.0);   // in x0
  Expression g1 = Expression::literal(1.0);  // in (x0, r)
  Expression g2 = Expression::literal(1.0);
  Expression g3 = Expression::literal(2.0);
  Expression alpha = Expression::literal(1.0);
  Expression beta = Expression::literal(1.0);
  UnicornVariant variant = UnicornVariant::Canonical;

  /// Parses DSL text. Throws SyntaxError, UnknownIdentifier, InvalidFamilyParameter
  /// (coefficient depends on s or z).
  static UnicornParams from_g(std::string_view k, std::string_view g1, std::string_view g2, std::string_view g3,
                              UnicornVariant variant = UnicornVariant::Canonical);
  static UnicornParams from_alpha_beta(std::string_view k, std::string_view alpha, std::string_view beta,
                                       UnicornVariant variant = UnicornVariant::Canonical);
  /// g1 = e^{2r}, g2 = e^r / sqrt(2), g3 = 1.
  static UnicornParams derived_instance(std::string_view k = "exp(x0)",
                                        UnicornVariant variant = UnicornVariant::Canonical);

  UnicornParams with_variant(UnicornVariant v) const;

  /// Coefficients in the other parametrization, as expressions.
  Expression g1_expr() const;
  Expression g2_expr() const;
  Expression g3_expr() const;
  Expression delta_expr() const;
  Expression alpha_expr() const;
  Expression beta_expr() const;

  /// DSL text of phi for the selected variant.
  std::string phi_text() const;
};

/// Checks g2 != 0 (G mode), Delta > 0 and alpha > 0 at every (x0, r) node of
/// `grid`, then returns the metric. Throws ZeroG2, NegativeDelta,
/// DegenerateAlphaBeta.
MetricSpec build_unicorn(const UnicornParams& params, const GridSpec& grid = {}, int n = 3);
/// No domain checks.
MetricSpec unicorn_metric(const UnicornParams& params, int n = 3);

/// Residual maxima over the (x0, r) nodes of a grid. Entry order:
///   0 [g2/sqrt(Delta)]_r
///   1 [g2^2/(g1 g3)]_r
///   2 k_r
///   3 [g2/sqrt(Delta)]_x0
///   4 [g3/g2]_x0 + 2 (k'/k) [g3/g2]
///   5 [g3/g2]_x0 + (k'/k) [g3/g2]
/// Entries 0-2 are the Landsberg conditions. Entries 3 and 4 form the
/// Berwald-degeneracy pair as printed; entries 3 and 5 are the pair obtained
/// from phi_x0 = g z phi_z, which for this family reduces to (k alpha)_x0 = 0
/// and beta_x0 = 0.
struct UnicornConditions {
  ResidualReport residuals;
  double min_delta = 0.0;
  double min_alpha = 0.0;

  static constexpr std::size_t kBetaR = 0, kRatioR = 1, kKR = 2, kBetaX0 = 3, kBerwaldK = 4, kBerwaldKFactorOne = 5;

  double landsberg_max() const;
  double berwald_max() const;             // entries 3, 4
  double berwald_factor_one_max() const;  // entries 3, 5
};

/// Throws ZeroG2 where g2 = 0, NegativeDelta where Delta <= 0.
UnicornConditions check_conditions(const UnicornParams& params, const GridSpec& grid = {});

struct RegularityProbeResult {
  double x0 = 0.0, r = 0.0;
  double alpha = 0.0, beta = 0.0, k = 0.0;
  double theta_ppp_plus = 0.0, theta_ppp_minus = 0.0;
  double predicted_plus = 0.0, predicted_minus = 0.0;
  double jump = 0.0;            // theta_ppp_plus - theta_ppp_minus
  double predicted_jump = 0.0;
  double theta0_fd = 0.0;       // one-sided extrapolation to t = 0+
  double theta0_direct = 0.0;   // theta at |t| = kThetaDirectT
  double theta0_predicted = 0.0;
  double theta_p_plus = 0.0, theta_p_minus = 0.0;

  double rel_error_plus() const;
  double rel_error_minus() const;
  /// Both one-sided values within `rel` of the predictions.
  bool matches(double rel = 1e-3) const;
};

inline constexpr double kThetaDirectT = 1e-10;

/// Uses the canonical variant regardless of params.variant. Throws
/// DegenerateAlphaBeta when alpha <= 0 at (x0, r).
RegularityProbeResult regularity_probe(const UnicornParams& params, double x0, double r, double h = 1e-2);

struct VariantResult {
  UnicornVariant variant = UnicornVariant::Canonical;
  std::optional<double> landsberg_max;  // absent when the tensors could not be evaluated
  std::optional<double> berwald_max;
  std::string error;
  bool landsberg_vanishes = false;
};

struct VariantConsistency {
  VariantResult canonical;
  VariantResult intro;
  /// max over the (x0, r) nodes of |g3 / g1|, the difference between the two radicands.
  double radicand_offset = 0.0;
  double tol = kDefaultVanishTol;
  /// "canonical", "intro", "both" or "neither".
  std::string vanishing() const;
};

VariantConsistency variant_consistency(const UnicornParams& params, const GridSpec& grid = {},
                                       double tol = kDefaultVanishTol);

}  // namespace finsler
