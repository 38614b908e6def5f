// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file spray.hpp
 * @brief Geodesic spray coefficients G^A of F = u phi.
 *
 * Closed form: G^0 = u^2 N, G^i = u^2 (W u_i + U x^i) with N, W, L, U built
 * from phi's partials. Oracle: G^A = 1/4 g^{AB} ([F^2]_{x^C y^B} y^C -
 * [F^2]_{x^B}) with every derivative taken by jets in raw coordinates.
 */

#include <optional>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/psi.hpp"

namespace finsler {

/// The twelve partials of phi the spray needs.
template <class T>
struct PhiPartials {
  T phi, s, z, ss, sz, zz, x0, r, x0s, x0z, rs, rz;
};

template <class T>
struct SprayTerms {
  T N, W, L, U, V, varphi, p1, p2, omega, lambda;
};

/// General formulas. `r` is a number; s and z may be jets. Throws
/// SingularLambda when Lambda's base value is zero.
template <class T>
SprayTerms<T> spray_terms(const PhiPartials<T>& d, double r, const T& s, const T& z);

/// Shortcut formulas for phi independent of s (N, W, L, U only).
/// Throws SingularOmega (phi - z phi_z = 0) or SingularPhiZZ.
template <class T>
SprayTerms<T> spray_terms_s_independent(const PhiPartials<T>& d, double r, const T& s, const T& z);

struct SprayQuantities {
  double N = 0, W = 0, L = 0, U = 0, V = 0, varphi = 0, p1 = 0, p2 = 0;
  double omega = 0, lambda = 0;
  /// Largest relative deviation between the general and the shortcut path
  /// (only when the shortcut was evaluated).
  std::optional<double> corollary_deviation;
};

inline constexpr double kCorollaryTolerance = 1e-10;

PhiPartials<double> phi_partials(const PhiTable& t);

/// Needs a table of order >= 2. With `s_independent`, the shortcut path is
/// also evaluated and its deviation recorded.
SprayQuantities spray_quantities(const PhiTable& t, bool s_independent = false);

struct SprayCoefficients {
  std::vector<double> G;  // index 0..n
};

SprayCoefficients spray(const MetricSpec& spec, const SamplePoint& p);
SprayCoefficients spray_oracle(const MetricSpec& spec, const SamplePoint& p);

/// G^A as jets over (y0, ..., yn) of order `y_order` at p. Throws
/// SingularMetric.
std::vector<Jet> spray_oracle_jets(const MetricSpec& spec, const SamplePoint& p, int y_order);

/// N, W, L, U, V as (s, z)-jets at a reduced point, obtained by running the
/// general formulas on (s, z)-projections of phi's partial jets.
struct SprayJets {
  ReducedPoint point;
  PsiCalculus pc;
  Jet N, W, L, U, V;
};

/// phi_order = 6 leaves jets of order 4 in (s, z).
SprayJets spray_jets(const MetricSpec& spec, const ReducedPoint& p, int phi_order = 6);

/// Agreement of two vectors: max|a-b| <= max(rel * max(|a|, |b|)_max, abs_floor).
struct Agreement {
  double max_abs_diff = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};
Agreement compare(std::span<const double> a, std::span<const double> b, double rel = 1e-6, double abs_floor = 1e-10);

}  // namespace finsler
