// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file jet.hpp
 * @brief Multivariate truncated Taylor polynomials ("jets").
 *
 * A Jet stores every Taylor coefficient of a function of k variables up to a
 * total degree (the order) around a base point. Coefficients are
 * Taylor-normalized: the entry for the monomial dx1^a1 ... dxk^ak is
 * d^(a1+...+ak) f / (a1! ... ak!). Storage is dense and graded
 * lexicographic, so a jet of lower order is a prefix of one of higher order
 * over the same variables and arithmetic between mixed orders truncates to
 * the smaller one.
 *
 * Everything here is a value type; jets are never mutated after
 * construction by the free functions, so they can be shared across threads.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finsler {

inline constexpr int kMaxJetVariables = 16;
inline constexpr int kMaxJetOrder = 15;

/// Exponent per variable, in the variable order of the owning JetSpace.
using MultiIndex = std::vector<int>;

namespace detail {
struct JetTables;
}

/// Ordered variable names plus a truncation order.
class JetSpace {
 public:
  JetSpace(std::vector<std::string> variables, int order);

  const std::vector<std::string>& variables() const noexcept;
  int num_variables() const noexcept;
  int order() const noexcept;
  /// Number of stored coefficients (multi-indices with total degree <= order).
  std::size_t size() const noexcept;

  /// Throws UnknownVariable.
  int variable_index(std::string_view name) const;

  /// Same variables, different order (cheap: tables are shared).
  JetSpace with_order(int order) const;
  bool same_variables(const JetSpace& other) const noexcept;

  /// Throws OrderExceeded when the total degree is above order().
  std::size_t index_of(const MultiIndex& idx) const;
  /// Multi-index from a list of variable names, e.g. {"s","s","z"}.
  MultiIndex multi_index(std::initializer_list<std::string_view> names) const;
  MultiIndex multi_index(std::span<const std::string> names) const;
  MultiIndex multi_index_at(std::size_t position) const;

  const detail::JetTables& tables() const noexcept;

 private:
  struct Impl;
  JetSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class Jet {
 public:
  Jet(JetSpace space, std::vector<double> coeffs);

  static Jet constant(const JetSpace& space, double value);
  /// Throws UnknownVariable.
  static Jet variable(const JetSpace& space, std::string_view name, double base);
  static Jet variable(const JetSpace& space, int index, double base);

  const JetSpace& space() const noexcept { return space_; }
  int order() const noexcept { return space_.order(); }
  double value() const noexcept { return coeffs_[0]; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  /// Taylor-normalized coefficient; 0 for indices above the order is NOT
  /// assumed: throws OrderExceeded.
  double coefficient(const MultiIndex& idx) const;
  /// d^idx f at the base point (coefficient times prod k_i!).
  double partial(const MultiIndex& idx) const;
  double partial(std::initializer_list<std::string_view> names) const;

  /// True when every non-constant coefficient is exactly zero.
  bool is_constant() const noexcept;

  /// d/dx_var; the result has order() - 1.
  Jet derivative(int var) const;
  Jet derivative(std::string_view name) const;
  /// Repeated derivative along a multi-index.
  Jet derivative(const MultiIndex& idx) const;
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

 private:
  JetSpace space_;
  std::vector<double> coeffs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

enum class ElementaryFunction { Sqrt, Exp, Log, Arctan, Sin, Cos, Pow };

std::string_view to_string(ElementaryFunction f);

/// Taylor coefficients f^(k)(x0)/k!, k = 0..order, of a univariate
/// elementary function. `exponent` is used by Pow only.
std::vector<double> taylor_coefficients(ElementaryFunction f, double x0, int order,
                                        double exponent = 0.0);

/// Composition f(x). Throws DomainError outside f's domain (sqrt, log and
/// non-integer pow need a positive base value).
Jet jet_apply(ElementaryFunction f, const Jet& x, double exponent = 0.0);

Jet sqrt(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet atan(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
/// Integer powers use repeated multiplication; others need a positive base.
Jet pow(const Jet& x, double p);
Jet pow(const Jet& x, int p);
/// 1/x; throws DivisionByZero when the base value is exactly zero.
Jet reciprocal(const Jet& x);

inline Jet jet_const(const JetSpace& space, double value) { return Jet::constant(space, value); }
inline Jet jet_var(const JetSpace& space, std::string_view name, double base) {
  return Jet::variable(space, name, base);
}
inline double extract_partial(const Jet& j, const MultiIndex& idx) { return j.partial(idx); }

/// Restrict a jet to a subset of its variables: monomials involving any
/// dropped variable are discarded (the dropped increments are set to zero).
/// `source_index[i]` is the source variable feeding target variable i.
Jet project(const Jet& j, const JetSpace& target, std::span<const int> source_index);

}  // namespace finsler
