// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file metric.hpp
 * @brief Metrics of the form F(x, y) = |ybar| * phi(x0, r, s, z).
 *
 * Coordinates on the tangent bundle are x = (x0, xbar), y = (y0, ybar) with
 * xbar, ybar in R^n. The reduced variables are
 *
 *   r = |xbar|,  u = |ybar|,  s = <xbar, ybar> / u,  z = y0 / u.
 */

#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finsler/expression.hpp"
#include "finsler/jet.hpp"

namespace finsler {

struct ReducedPoint {
  double x0 = 0.0;
  double r = 1.0;
  double s = 0.0;
  double z = 1.0;
};

/// A point of the slit tangent bundle in raw coordinates.
struct SamplePoint {
  double x0 = 0.0;
  std::vector<double> xbar;
  double y0 = 0.0;
  std::vector<double> ybar;

  int n() const noexcept { return static_cast<int>(xbar.size()); }
  double r() const;
  double u() const;
  double s() const;
  double z() const;
  ReducedPoint reduced() const { return {x0, r(), s(), z()}; }
  /// u_i = y^i / u.
  std::vector<double> unit_ybar() const;

  /// xbar = (r, 0, ...), ybar = u (s/r, sqrt(r^2 - s^2)/r, 0, ...), y0 = z u.
  static SamplePoint canonical(int n, const ReducedPoint& p, double u = 1.0);
  SamplePoint with_scaled_y(double lambda) const;
  /// (x0, O xbar, y0, O ybar).
  SamplePoint rotated(const Eigen::MatrixXd& O) const;
};

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of R's diagonal fixed).
Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng);

struct Interval {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool contains(double v) const noexcept { return v >= min && v <= max; }
};

/// Box on the reduced variables. Points with r <= 0 or |s| >= r are always
/// outside.
struct DomainBox {
  Interval x0;
  Interval r{0.0, std::numeric_limits<double>::infinity()};
  Interval s;
  Interval z;
  bool contains(const ReducedPoint& p) const noexcept;
};

class MetricSpec {
 public:
  MetricSpec(std::string name, Expression phi, ParameterEnv params = {}, int n = 3, DomainBox domain = {});

  /// Parses `phi_text` with the names in `params` declared.
  static MetricSpec from_text(std::string name, std::string_view phi_text, ParameterEnv params = {}, int n = 3);
  /// Built-in family; parameters are substituted into the expression.
  static MetricSpec from_family(std::string_view family, const ParameterEnv& params = {}, int n = 3);

  const std::string& name() const noexcept { return name_; }
  int n() const noexcept { return n_; }
  const Expression& phi() const noexcept { return phi_; }
  const ParameterEnv& params() const noexcept { return params_; }
  const DomainBox& domain() const noexcept { return domain_; }

  MetricSpec with_dimension(int n) const;
  MetricSpec with_domain(DomainBox domain) const;

  /// The expression never mentions s.
  bool s_independent() const { return !phi_.depends_on(Variable::S); }

  double phi_at(const ReducedPoint& p) const;
  Jet phi_jet(const Coordinates<Jet>& at) const { return eval_jet(phi_, at, params_); }
  double finsler_value(const SamplePoint& p) const;

 private:
  std::string name_;
  Expression phi_;
  ParameterEnv params_;
  int n_;
  DomainBox domain_;
};

/// One grid axis: `count` equispaced values on [min, max].
struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  std::vector<double> values() const;
};

/// Grid over (x0, r, s/r, z); the s-axis is a fraction of r so every point
/// satisfies |s| < r. Points are enumerated with z fastest, then s, r, x0.
struct GridSpec {
  Axis x0{-1.0, 1.0, 5};
  Axis r{0.2, 1.0, 5};
  Axis s_fraction{-0.9, 0.9, 5};
  Axis z{0.1, 2.0, 5};

  std::size_t size() const;
  /// Throws EmptyGrid when any axis has count < 1.
  std::vector<ReducedPoint> points() const;
  std::string describe() const;
};

/// Taylor jet of phi over (x0, r, s, z) at a point.
class PhiTable {
 public:
  PhiTable(ReducedPoint p, Jet jet) : point_(p), jet_(std::move(jet)) {}

  const ReducedPoint& point() const noexcept { return point_; }
  const Jet& jet() const noexcept { return jet_; }
  int order() const noexcept { return jet_.order(); }

  double partial(int dx0, int dr, int ds, int dz) const { return jet_.partial(MultiIndex{dx0, dr, ds, dz}); }
  double phi() const noexcept { return jet_.value(); }
  double phi_s() const { return partial(0, 0, 1, 0); }
  double phi_z() const { return partial(0, 0, 0, 1); }
  double phi_ss() const { return partial(0, 0, 2, 0); }
  double phi_sz() const { return partial(0, 0, 1, 1); }
  double phi_zz() const { return partial(0, 0, 0, 2); }

 private:
  ReducedPoint point_;
  Jet jet_;
};

inline const std::vector<std::string>& reduced_variable_names() {
  static const std::vector<std::string> names{"x0", "r", "s", "z"};
  return names;
}

/// Coordinate jets (x0, r, s, z) of the given order at p.
Coordinates<Jet> reduced_coordinate_jets(const ReducedPoint& p, int order);

/// Throws DomainError (from evaluation) or NonPositivePhi.
PhiTable phi_table(const MetricSpec& spec, const ReducedPoint& p, int order = 6);

double omega(const PhiTable& t);
double lambda_(const PhiTable& t, double r, double s);

/// Raw-coordinate jets of (x0, xbar, y0, ybar) in some common space.
struct RawJets {
  Jet x0;
  std::vector<Jet> xbar;
  Jet y0;
  std::vector<Jet> ybar;
};

/// (x0, r, s, z) and u as jets, by the chain rule through the raw coordinates.
struct ReducedJets {
  Coordinates<Jet> coords;
  Jet u;
};
ReducedJets reduce(const RawJets& raw);

/// F = u * phi as a jet over whatever variables `raw` carries.
Jet finsler_jet(const MetricSpec& spec, const RawJets& raw);

/// Raw jets where only y varies: variables (y0, y1, ..., yn).
RawJets y_jets(const SamplePoint& p, int order);

/// g_AB = 1/2 d^2(F^2)/dy^A dy^B, (n+1)x(n+1).
Eigen::MatrixXd fundamental_tensor(const MetricSpec& spec, const SamplePoint& p);

struct ValidityReport {
  std::size_t points = 0;
  std::size_t criterion_failures = 0;
  std::size_t oracle_failures = 0;
  /// Points where the phi/Omega/Lambda verdict differs from the Hessian verdict.
  std::size_t disagreements = 0;
  /// Points where phi could not be evaluated.
  std::size_t evaluation_failures = 0;
  double min_phi = std::numeric_limits<double>::infinity();
  double min_lambda = std::numeric_limits<double>::infinity();
  double min_omega = std::numeric_limits<double>::infinity();
  /// min over points of (smallest eigenvalue / largest eigenvalue) of g.
  double min_eigen_ratio = std::numeric_limits<double>::infinity();
  std::optional<ReducedPoint> first_failure;

  bool criterion_pass() const noexcept { return criterion_failures == 0; }
  bool oracle_pass() const noexcept { return oracle_failures == 0; }
  bool pass() const noexcept { return criterion_pass() && oracle_pass(); }
};

inline constexpr double kEigenRatioFloor = 1e-9;

/// Throws EmptyGrid.
ValidityReport validate(const MetricSpec& spec, const GridSpec& grid);

}  // namespace finsler
