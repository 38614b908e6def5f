// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file expression.hpp
 * @brief A small expression language for scalar functions of (x0, r, s, z).
 *
 * Grammar (whitespace insensitive, ASCII only):
 *
 *   expr    := term { ("+" | "-") term }
 *   term    := unary { ("*" | "/") unary }
 *   unary   := "-" unary | power
 *   power   := primary [ "^" unary ]          (right associative)
 *   primary := number | variable | parameter | func "(" expr ")" | "(" expr ")"
 *   func    := sqrt | exp | log | arctan | sin | cos
 *
 * The reserved variables are x0, r, s and z. Every other identifier must be
 * a declared parameter. There is no implicit multiplication and no unary
 * plus.
 */

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

enum class Variable { X0 = 0, R = 1, S = 2, Z = 3 };

inline constexpr std::array<std::string_view, 4> kVariableNames{"x0", "r", "s", "z"};

std::string_view to_string(Variable v);
std::optional<Variable> variable_from_name(std::string_view name);
bool is_reserved_name(std::string_view name);

/// Named real parameters. Reserved names (variables, function names) are
/// rejected.
class ParameterEnv {
 public:
  ParameterEnv() = default;
  ParameterEnv(std::initializer_list<std::pair<const std::string, double>> init);

  void set(const std::string& name, double value);
  bool contains(std::string_view name) const;
  /// Throws UnknownIdentifier.
  double at(std::string_view name) const;
  std::set<std::string> names() const;
  const std::map<std::string, double, std::less<>>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double, std::less<>> values_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable AST; copies share structure.
class Expression {
 public:
  enum class Kind { Literal, Var, Parameter, Negate, Binary, Call };

  struct Node {
    Kind kind = Kind::Literal;
    double value = 0.0;
    Variable variable = Variable::X0;
    std::string name;
    BinaryOp op = BinaryOp::Add;
    ElementaryFunction function = ElementaryFunction::Sqrt;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  static Expression literal(double v);
  static Expression variable(Variable v);
  static Expression parameter(std::string name);
  static Expression negate(const Expression& e);
  static Expression binary(BinaryOp op, const Expression& a, const Expression& b);
  static Expression call(ElementaryFunction f, const Expression& arg);

  const Node& root() const noexcept { return *root_; }
  Kind kind() const noexcept { return root_->kind; }

  /// Canonical text; parse(to_string()) reproduces the same tree.
  std::string to_string() const;

  bool depends_on(Variable v) const;
  std::set<std::string> parameters() const;
  /// Number of parameter references (with multiplicity).
  int parameter_reference_count() const;

  /// Replace parameters by sub-expressions.
  Expression substitute(const std::map<std::string, Expression>& replacements) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);

/// Throws SyntaxError (with byte offset) or UnknownIdentifier.
Expression parse(std::string_view text, const std::set<std::string>& parameter_names = {});
Expression parse(std::string_view text, const ParameterEnv& params);

template <class T>
using Coordinates = std::array<T, 4>;  // indexed by Variable

/// Plain evaluation. Throws DomainError / DivisionByZero.
double evaluate(const Expression& e, const Coordinates<double>& at, const ParameterEnv& params = {});

/// Jet evaluation; all four coordinates must share one JetSpace.
Jet eval_jet(const Expression& e, const Coordinates<Jet>& at, const ParameterEnv& params = {});

/// Built-in metric families:
///   euclidean            sqrt(z^2+1)
///   randers   {c}        sqrt(z^2+1)+c*z, |c| < 1
///   unicorn   {alpha, beta, k}
///       k*sqrt((z+alpha*beta)^2+alpha^2)*exp(beta*arctan((z+alpha*beta)/alpha)), alpha > 0, k > 0
/// Throws InvalidFamilyParameter.
Expression builtin(std::string_view family, const ParameterEnv& params = {});

}  // namespace finsler
