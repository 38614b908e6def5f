// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file characterize.hpp
 * @brief Residual evaluators for the Berwald and Landsberg characterization
 * systems, and a numerical classifier built on the curvature tensors.
 */

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "finsler/curvature.hpp"
#include "finsler/metric.hpp"

namespace finsler {

inline constexpr double kDefaultVanishTol = 1e-7;

struct ResidualEntry {
  std::string name;
  double max_residual = 0.0;
  ReducedPoint argmax{};
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  std::size_t points = 0;
  std::string grid;

  double max_residual() const;
  bool vanishes(double tol) const { return max_residual() <= tol; }
};

/// Coefficient functions tabulated at one (x0, r) node.
struct CoefficientRow {
  double x0 = 0.0;
  double r = 0.0;
  std::vector<double> values;
};

/// The eight Psi-form conditions on U, N, W for vanishing Berwald curvature.
/// Requires n >= 3.
ResidualReport berwald_psi_residuals(const MetricSpec& spec, const GridSpec& grid);

/// Least-squares fit of U, L, W over the (s, z) samples at each (x0, r) node
/// to U = f1 s^2/2 + f2 s z + f3 z^2/2 + f4,
///    L = f5 s^2/2 + f6 s z + f7 z^2/2 + f8 - s z (f1 s^2/2 + f2 s z + f3 z^2/2),
///    W = f9 s + f10 z.
struct PolyFit {
  std::vector<CoefficientRow> f;     // values = f1..f10
  double fit_residual = 0.0;         // max |sample - fitted| over U, L, W
  std::array<double, 3> pde_residual{};  // the three coupled equations with fitted U, L, W
  std::size_t samples_per_node = 0;
  std::string grid;

  double max_residual() const;
};
/// Throws RankDeficientFit when the (s, z) samples cannot determine the fit.
PolyFit berwald_poly_fit(const MetricSpec& spec, const GridSpec& grid);

/// For s-independent phi: recovers g1 = -phi_r / (2 r (phi - z phi_z)) and
/// g2 = phi_x0 / (z phi_z) at z = kProbeZ and reports how far the two
/// equations miss at every other grid z.
inline constexpr double kProbeZ = 1.0;
struct SIndependentBerwald {
  ResidualReport residuals;
  std::vector<CoefficientRow> g;  // values = g1, g2
};
/// Throws NotSIndependent, DegenerateDenominator.
SIndependentBerwald s_independent_berwald_check(const MetricSpec& spec, const GridSpec& grid);

/// The four Landsberg conditions for s-independent phi. Throws NotSIndependent.
ResidualReport landsberg_pde_residuals(const MetricSpec& spec, const GridSpec& grid);

/// max |phi_s| over the grid.
double max_abs_phi_s(const MetricSpec& spec, const GridSpec& grid);
inline constexpr double kSIndependenceTol = 1e-12;

/// One-sided behaviour at t = 0 of theta(t) = |t| phi(x0, r, 1/|t|), the
/// restriction of F to y0 = 1, ybar = (t, 0, ...).
struct ThetaProbe {
  double x0 = 0.0, r = 0.0;
  double theta0_plus = 0.0, theta0_minus = 0.0;
  double d1_plus = 0.0, d1_minus = 0.0;
  double d3_plus = 0.0, d3_minus = 0.0;

  double jump1() const { return d1_plus - d1_minus; }
  double jump3() const { return d3_plus - d3_minus; }
  /// No jump in theta' or theta''' beyond rel * max(1, |theta(0)|).
  bool smooth(double rel = 1e-4) const;
};
ThetaProbe theta_probe(const MetricSpec& spec, double x0, double r, double h = 1e-2);

enum class Verdict { InvalidMetric, Berwald, LandsbergNotBerwald, NonLandsberg };
std::string to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::InvalidMetric;
  double tol = kDefaultVanishTol;
  ValidityReport validity;
  std::optional<CurvatureSweep> sweep;  // absent when the tensors could not be evaluated
  std::string curvature_error;
  bool s_independent = false;
  /// Regularity evidence (s-independent metrics only): theta probes at the
  /// grid's (x0, r) nodes.
  std::vector<ThetaProbe> probes;
  bool regular = false;
  /// LANDSBERG_NOT_BERWALD for a regular s-independent metric.
  bool anomaly = false;
};

Classification classify(const MetricSpec& spec, const GridSpec& grid, double tol = kDefaultVanishTol);

/// Verdicts of every independent path for one metric.
struct Concordance {
  std::string metric;
  bool tensor_berwald = false;
  bool psi_berwald = false;
  bool fit_berwald = false;
  std::optional<bool> s_independent_berwald;  // s-independent metrics only
  bool tensor_landsberg = false;
  std::optional<bool> pde_landsberg;          // s-independent metrics only
  double tensor_berwald_max = 0.0, psi_max = 0.0, fit_max = 0.0;
  double tensor_landsberg_max = 0.0;
  std::optional<double> s_independent_max, pde_max;

  bool berwald_agree() const;
  bool landsberg_agree() const;
  bool agree() const { return berwald_agree() && landsberg_agree(); }
};

/// The fit verdict uses 10 * tol.
Concordance concordance(const MetricSpec& spec, const GridSpec& grid, double tol = kDefaultVanishTol);

}  // namespace finsler
