// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file psi.hpp
 * @brief The radial operator Psi(T) = -s T_s - z T_z on (s, z)-jets and the
 * identity checks built on it.
 *
 * All jets in this module live over the two variables {s, z} (index 0 and 1)
 * expanded at a fixed base point. Each application of Psi or a partial
 * derivative lowers the jet order by one.
 */

#include <string>
#include <vector>

#include "finsler/expression.hpp"
#include "finsler/jet.hpp"
#include "finsler/metric.hpp"

namespace finsler {

const std::vector<std::string>& sz_variable_names();

class PsiCalculus {
 public:
  PsiCalculus(double s, double z) : s0_(s), z0_(z) {}

  double s() const noexcept { return s0_; }
  double z() const noexcept { return z0_; }

  JetSpace space(int order) const;
  Jet s_jet(int order) const;
  Jet z_jet(int order) const;
  /// z^k at the requested order; throws ZDivision when k < 0 and z = 0.
  Jet z_pow(int k, int order) const;

  Jet psi(const Jet& t) const;
  Jet d_s(const Jet& t) const { return t.derivative(0); }
  Jet d_z(const Jet& t) const { return t.derivative(1); }
  /// d/ds of Psi(t) and d/dz of Psi(t).
  Jet psi_s(const Jet& t) const { return d_s(psi(t)); }
  Jet psi_z(const Jet& t) const { return d_z(psi(t)); }
  /// z^k * t (k may be negative).
  Jet zk(int k, const Jet& t) const { return t * z_pow(k, t.order()); }
  Jet times_s(const Jet& t) const { return t * s_jet(t.order()); }

 private:
  double s0_;
  double z0_;
};

/// A function Theta of (s, z) given by an expression in (x0, r, s, z) with
/// x0 and r frozen.
class ThetaField {
 public:
  ThetaField(Expression expr, ParameterEnv params = {}, double x0 = 0.0, double r = 1.0);

  const Expression& expression() const noexcept { return expr_; }
  const ParameterEnv& params() const noexcept { return params_; }
  double x0() const noexcept { return x0_; }
  double r() const noexcept { return r_; }

  /// Jet over {s, z}.
  Jet jet(double s, double z, int order) const;
  double value(double s, double z) const;

 private:
  Expression expr_;
  ParameterEnv params_;
  double x0_;
  double r_;
};

/// Psi(theta) at a point, via an order-1 jet.
double psi(const ThetaField& theta, double s, double z);

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
  /// Largest |lhs| seen; reported so residuals can be read relative to scale.
  double max_lhs = 0.0;
};

struct IdentityReport {
  std::vector<IdentityResidual> identities;
  std::size_t points = 0;
  double max_residual() const;
};

struct SzGrid {
  Axis s{-0.9, 0.9, 5};
  Axis z{0.1, 2.0, 5};
};

inline constexpr int kScalarIdentityCount = 9;
inline constexpr int kVectorIdentityCount = 5;

/// Names of the nine scalar identities, in report order.
const std::vector<std::string>& scalar_identity_names();
const std::vector<std::string>& vector_identity_names();

/// LHS and RHS of every scalar identity at one point. Needs an order >= 5
/// jet of Theta.
std::vector<std::pair<double, double>> scalar_identity_sides(const PsiCalculus& pc, const Jet& theta);

/// Max |LHS - RHS| of the nine scalar identities over the grid. Points with
/// z = 0 are skipped.
IdentityReport verify_identities(const ThetaField& theta, const SzGrid& grid);

/// Sum over the rotations of the index tuple: f(a, b) + f(b, a) for two
/// indices, f(a, b, c) + f(b, c, a) + f(c, a, b) for three.
template <class F>
double cyclic(F&& f, int a, int b) {
  return f(a, b) + f(b, a);
}
template <class F>
double cyclic(F&& f, int a, int b, int c) {
  return f(a, b, c) + f(b, c, a) + f(c, a, b);
}

inline double kronecker(int a, int b) noexcept { return a == b ? 1.0 : 0.0; }

/// The five y-derivative identities for Theta(x0, r, s, z) at a raw point:
/// left sides by jets in (y0, ..., yn) through the chain rule, right sides
/// from (s, z)-jets of Theta. Requires n >= 3 and z != 0.
IdentityReport verify_vector_identities(const Expression& theta, const ParameterEnv& params, const SamplePoint& p);

}  // namespace finsler
