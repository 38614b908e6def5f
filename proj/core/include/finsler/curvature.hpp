// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file curvature.hpp
 * @brief Berwald tensor B^A_BCD = d^3 G^A / dy^B dy^C dy^D and Landsberg
 * tensor L_ABC = 1/2 F F_{y^D} B^D_ABC.
 *
 * Both tensors are stored densely over all (n+1)^4 resp. (n+1)^3 index
 * tuples, so symmetry is a checkable property rather than a storage
 * artifact. Index 0 is the x0 direction, 1..n the spatial ones.
 */

#include <array>
#include <span>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/spray.hpp"

namespace finsler {

class BerwaldTensor {
 public:
  explicit BerwaldTensor(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const noexcept { return dim_; }
  double& operator()(int a, int b, int c, int d) { return c_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return c_[index(a, b, c, d)]; }
  std::span<const double> components() const noexcept { return c_; }

  double max_abs() const;
  double frobenius() const;
  /// max |B^A_BCD - B^A_{perm(BCD)}| over all permutations.
  double symmetry_defect() const;
  /// max_{A,B,C} |sum_D B^A_BCD y^D|.
  double contraction_defect(std::span<const double> y) const;

 private:
  std::size_t index(int a, int b, int c, int d) const noexcept {
    return ((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d;
  }
  int dim_;
  std::vector<double> c_;
};

class LandsbergTensor {
 public:
  explicit LandsbergTensor(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  int dim() const noexcept { return dim_; }
  double& operator()(int a, int b, int c) { return c_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return c_[index(a, b, c)]; }
  std::span<const double> components() const noexcept { return c_; }

  double max_abs() const;
  double frobenius() const;
  double symmetry_defect() const;
  /// max_{A,B} |sum_C L_ABC y^C|.
  double contraction_defect(std::span<const double> y) const;

 private:
  std::size_t index(int a, int b, int c) const noexcept {
    return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + c;
  }
  int dim_;
  std::vector<double> c_;
};

/// Component families of the closed forms, named by the number of zero
/// lower indices: B^0_000, B^0_00l, B^0_0kl, B^0_jkl, B^i_000, B^i_00l,
/// B^i_0kl, B^i_jkl; and L_000, L_00l, L_0kl, L_jkl (all indices of L
/// count).
inline constexpr int kBerwaldFamilies = 8;
inline constexpr int kLandsbergFamilies = 4;
const std::array<std::string, kBerwaldFamilies>& berwald_family_names();
const std::array<std::string, kLandsbergFamilies>& landsberg_family_names();
int berwald_family(int a, int b, int c, int d);
int landsberg_family(int a, int b, int c);

/// Closed forms at p. Throw ZDivision (z = 0), SingularLambda.
BerwaldTensor berwald_closed(const MetricSpec& spec, const SamplePoint& p);
LandsbergTensor landsberg_closed(const MetricSpec& spec, const SamplePoint& p);

/// Both closed forms from one spray-jet evaluation.
struct ClosedCurvature {
  BerwaldTensor berwald;
  LandsbergTensor landsberg;
};
ClosedCurvature curvature_closed(const MetricSpec& spec, const SamplePoint& p);

/// Oracles: third y-derivatives of the raw-coordinate spray, and the
/// contraction 1/2 F (phi_z B^0 + (phi_s x^i + Omega u_i) B^i).
BerwaldTensor berwald_oracle(const MetricSpec& spec, const SamplePoint& p);
LandsbergTensor landsberg_oracle(const MetricSpec& spec, const SamplePoint& p);
LandsbergTensor landsberg_from_berwald(const MetricSpec& spec, const SamplePoint& p, const BerwaldTensor& b);

/// max |a - b| per family.
std::array<double, kBerwaldFamilies> berwald_family_diff(const BerwaldTensor& a, const BerwaldTensor& b);
std::array<double, kLandsbergFamilies> landsberg_family_diff(const LandsbergTensor& a, const LandsbergTensor& b);
std::array<double, kBerwaldFamilies> berwald_family_max(const BerwaldTensor& t);
std::array<double, kLandsbergFamilies> landsberg_family_max(const LandsbergTensor& t);

/// y = (y0, ybar) of a sample point.
std::vector<double> y_vector(const SamplePoint& p);

/// Sweep of the closed forms over a grid at canonical points (u = 1),
/// optionally compared against the oracles.
struct CurvatureSweep {
  std::size_t points = 0;
  double berwald_max = 0.0;
  double landsberg_max = 0.0;
  ReducedPoint berwald_argmax{};
  ReducedPoint landsberg_argmax{};
  std::array<double, kBerwaldFamilies> berwald_family{};
  std::array<double, kLandsbergFamilies> landsberg_family{};

  bool with_oracle = false;
  double berwald_oracle_diff = 0.0;     // max over points of max |closed - oracle|
  double landsberg_oracle_diff = 0.0;
  bool berwald_oracle_pass = true;      // per-point relative test held everywhere
  bool landsberg_oracle_pass = true;
  std::array<double, kBerwaldFamilies> berwald_family_oracle_diff{};
  std::array<double, kLandsbergFamilies> landsberg_family_oracle_diff{};
  double symmetry_defect = 0.0;        // max over both closed tensors
  double contraction_defect = 0.0;     // normalized by (max_abs + 1)
};

CurvatureSweep curvature_sweep(const MetricSpec& spec, const GridSpec& grid, bool with_oracle,
                               double oracle_rel = 1e-6);

}  // namespace finsler
