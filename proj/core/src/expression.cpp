// SPDX-License-Identifier: Apache-2.0
#include "finsler/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "finsler/error.hpp"

namespace finsler {

namespace {

constexpr std::array<std::pair<std::string_view, ElementaryFunction>, 6> kFunctions{{
    {"sqrt", ElementaryFunction::Sqrt},
    {"exp", ElementaryFunction::Exp},
    {"log", ElementaryFunction::Log},
    {"arctan", ElementaryFunction::Arctan},
    {"sin", ElementaryFunction::Sin},
    {"cos", ElementaryFunction::Cos},
}};

std::optional<ElementaryFunction> function_from_name(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Variable v) { return kVariableNames[static_cast<std::size_t>(v)]; }

std::optional<Variable> variable_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kVariableNames.size(); ++i) {
    if (kVariableNames[i] == name) return static_cast<Variable>(i);
  }
  return std::nullopt;
}

bool is_reserved_name(std::string_view name) {
  return variable_from_name(name).has_value() || function_from_name(name).has_value();
}

// ---------------------------------------------------------------------------

ParameterEnv::ParameterEnv(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

void ParameterEnv::set(const std::string& name, double value) {
  if (is_reserved_name(name)) throw Error("parameter name '" + name + "' shadows a reserved name");
  if (name.empty()) throw Error("empty parameter name");
  values_[name] = value;
}

bool ParameterEnv::contains(std::string_view name) const { return values_.find(name) != values_.end(); }

double ParameterEnv::at(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnknownIdentifier(std::string(name), 0);
  return it->second;
}

std::set<std::string> ParameterEnv::names() const {
  std::set<std::string> out;
  for (const auto& [k, v] : values_) out.insert(k);
  return out;
}

// ---------------------------------------------------------------------------

Expression Expression::literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = v;
  return Expression(std::move(n));
}

Expression Expression::variable(Variable v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->variable = v;
  return Expression(std::move(n));
}

Expression Expression::parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Parameter;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::negate(const Expression& e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->lhs = e.root_;
  return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, const Expression& a, const Expression& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->lhs = a.root_;
  n->rhs = b.root_;
  return Expression(std::move(n));
}

Expression Expression::call(ElementaryFunction f, const Expression& arg) {
  if (f == ElementaryFunction::Pow) throw Error("pow is spelled with '^' in expressions");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->function = f;
  n->lhs = arg.root_;
  return Expression(std::move(n));
}

Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Div, a, b); }
Expression operator-(const Expression& a) { return Expression::negate(a); }

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

// precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom
int precedence(const Expression::Node& n) {
  switch (n.kind) {
    case Expression::Kind::Negate: return 3;
    case Expression::Kind::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 5;
    case Expression::Kind::Literal: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print(const Expression::Node& n, std::string& out);

void print_child(const Expression::Node& child, int min_precedence, std::string& out) {
  const bool parens = precedence(child) < min_precedence;
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Expression::Node& n, std::string& out) {
  switch (n.kind) {
    case Expression::Kind::Literal:
      if (n.value < 0.0) {
        out += '-';
        out += format_number(-n.value);
      } else {
        out += format_number(n.value);
      }
      return;
    case Expression::Kind::Var: out += to_string(n.variable); return;
    case Expression::Kind::Parameter: out += n.name; return;
    case Expression::Kind::Negate:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Expression::Kind::Call:
      out += to_string(n.function);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    case Expression::Kind::Binary: {
      const int p = precedence(n);
      if (n.op == BinaryOp::Pow) {
        print_child(*n.lhs, 5, out);
        out += '^';
        print_child(*n.rhs, 3, out);
        return;
      }
      print_child(*n.lhs, p, out);
      switch (n.op) {
        case BinaryOp::Add: out += " + "; break;
        case BinaryOp::Sub: out += " - "; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
        case BinaryOp::Pow: break;
      }
      print_child(*n.rhs, p + 1, out);
      return;
    }
  }
}

bool equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expression::Kind::Literal: return a->value == b->value;
    case Expression::Kind::Var: return a->variable == b->variable;
    case Expression::Kind::Parameter: return a->name == b->name;
    case Expression::Kind::Negate: return equal(a->lhs, b->lhs);
    case Expression::Kind::Call: return a->function == b->function && equal(a->lhs, b->lhs);
    case Expression::Kind::Binary: return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

template <class F>
void visit(const Expression::Node& n, F&& f) {
  f(n);
  if (n.lhs) visit(*n.lhs, f);
  if (n.rhs) visit(*n.rhs, f);
}

NodePtr substitute(const NodePtr& n, const std::map<std::string, Expression>& rep) {
  if (n->kind == Expression::Kind::Parameter) {
    auto it = rep.find(n->name);
    if (it != rep.end()) return std::make_shared<Expression::Node>(it->second.root());
    return n;
  }
  if (!n->lhs) return n;
  auto copy = std::make_shared<Expression::Node>(*n);
  copy->lhs = substitute(n->lhs, rep);
  if (n->rhs) copy->rhs = substitute(n->rhs, rep);
  return copy;
}

}  // namespace

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) { return equal(a.root_, b.root_); }

bool Expression::depends_on(Variable v) const {
  bool found = false;
  visit(*root_, [&](const Node& n) { found = found || (n.kind == Kind::Var && n.variable == v); });
  return found;
}

std::set<std::string> Expression::parameters() const {
  std::set<std::string> out;
  visit(*root_, [&](const Node& n) {
    if (n.kind == Kind::Parameter) out.insert(n.name);
  });
  return out;
}

int Expression::parameter_reference_count() const {
  int count = 0;
  visit(*root_, [&](const Node& n) { count += n.kind == Kind::Parameter ? 1 : 0; });
  return count;
}

Expression Expression::substitute(const std::map<std::string, Expression>& replacements) const {
  return Expression(finsler::substitute(root_, replacements));
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& params) : text_(text), params_(params) {}

  Expression parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("empty expression", pos_);
    Expression e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view text_;
  const std::set<std::string>& params_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return Expression::negate(unary());
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return Expression::binary(BinaryOp::Pow, base, unary());
    return base;
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw SyntaxError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // "2e" is 2 followed by identifier e -> syntax error later
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) throw SyntaxError("malformed number", start);
    skip_ws();
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                text_[pos_] == '(')) {
      throw SyntaxError("implicit multiplication is not allowed", pos_);
    }
    return Expression::literal(value);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto f = function_from_name(name);
      if (!f) throw UnknownIdentifier(name, start);
      ++pos_;
      Expression arg = expr();
      if (!accept(')')) throw SyntaxError("expected ')' after function argument", pos_);
      return Expression::call(*f, arg);
    }
    if (auto v = variable_from_name(name)) return Expression::variable(*v);
    if (function_from_name(name)) throw SyntaxError("function '" + name + "' needs an argument", pos_);
    if (params_.count(name) != 0) return Expression::parameter(name);
    throw UnknownIdentifier(name, start);
  }
};

}  // namespace

Expression parse(std::string_view text, const std::set<std::string>& parameter_names) {
  return Parser(text, parameter_names).parse_all();
}

Expression parse(std::string_view text, const ParameterEnv& params) { return parse(text, params.names()); }

// ---------------------------------------------------------------------------
// evaluation

namespace {

bool is_integer_exponent(double p) { return std::isfinite(p) && std::floor(p) == p && std::fabs(p) < 1e6; }

struct DoubleAlgebra {
  using T = double;
  const Coordinates<double>& at;
  T constant(double v) const { return v; }
  T variable(Variable v) const { return at[static_cast<std::size_t>(v)]; }
  static T divide(const T& a, const T& b) {
    if (b == 0.0) throw DivisionByZero("division by zero");
    return a / b;
  }
  static T power(const T& a, const T& p) {
    if (is_integer_exponent(p)) {
      const int n = static_cast<int>(p);
      if (n < 0 && a == 0.0) throw DivisionByZero("zero raised to a negative power");
      double r = 1.0;
      double b = a;
      unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
      while (e != 0) {
        if (e & 1u) r *= b;
        e >>= 1u;
        if (e != 0) b *= b;
      }
      return n < 0 ? 1.0 / r : r;
    }
    if (!(a > 0.0)) throw DomainError("non-integer power of a non-positive base");
    return std::exp(p * std::log(a));
  }
  static T apply(ElementaryFunction f, const T& x) {
    switch (f) {
      case ElementaryFunction::Sqrt:
        if (x < 0.0) throw DomainError("sqrt of negative value");
        return std::sqrt(x);
      case ElementaryFunction::Exp: return std::exp(x);
      case ElementaryFunction::Log:
        if (!(x > 0.0)) throw DomainError("log of non-positive value");
        return std::log(x);
      case ElementaryFunction::Arctan: return std::atan(x);
      case ElementaryFunction::Sin: return std::sin(x);
      case ElementaryFunction::Cos: return std::cos(x);
      case ElementaryFunction::Pow: break;
    }
    throw Error("unsupported function");
  }
};

struct JetAlgebra {
  using T = Jet;
  const Coordinates<Jet>& at;
  T constant(double v) const { return Jet::constant(at[0].space(), v); }
  T variable(Variable v) const { return at[static_cast<std::size_t>(v)]; }
  static T divide(const T& a, const T& b) { return a / b; }
  static T power(const T& a, const T& p) {
    if (p.is_constant()) return finsler::pow(a, p.value());
    return finsler::exp(p * finsler::log(a));
  }
  static T apply(ElementaryFunction f, const T& x) { return jet_apply(f, x); }
};

template <class Algebra>
typename Algebra::T eval_node(const Expression::Node& n, const Algebra& alg, const ParameterEnv& params) {
  using T = typename Algebra::T;
  switch (n.kind) {
    case Expression::Kind::Literal: return alg.constant(n.value);
    case Expression::Kind::Var: return alg.variable(n.variable);
    case Expression::Kind::Parameter: return alg.constant(params.at(n.name));
    case Expression::Kind::Negate: return -eval_node(*n.lhs, alg, params);
    case Expression::Kind::Call: return Algebra::apply(n.function, eval_node(*n.lhs, alg, params));
    case Expression::Kind::Binary: {
      T a = eval_node(*n.lhs, alg, params);
      T b = eval_node(*n.rhs, alg, params);
      switch (n.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return Algebra::divide(a, b);
        case BinaryOp::Pow: return Algebra::power(a, b);
      }
    }
  }
  throw Error("malformed expression tree");
}

}  // namespace

double evaluate(const Expression& e, const Coordinates<double>& at, const ParameterEnv& params) {
  return eval_node(e.root(), DoubleAlgebra{at}, params);
}

Jet eval_jet(const Expression& e, const Coordinates<Jet>& at, const ParameterEnv& params) {
  for (const auto& j : at) {
    if (!j.space().same_variables(at[0].space())) throw Error("eval_jet: coordinates live in different jet spaces");
  }
  return eval_node(e.root(), JetAlgebra{at}, params);
}

// ---------------------------------------------------------------------------

Expression builtin(std::string_view family, const ParameterEnv& params) {
  auto need = [&](const char* name) {
    if (!params.contains(name)) {
      throw InvalidFamilyParameter(std::string(family) + " needs parameter '" + name + "'");
    }
    return params.at(name);
  };
  if (family == "euclidean") return parse("sqrt(z^2+1)");
  if (family == "randers") {
    const double c = need("c");
    if (!(std::fabs(c) < 1.0)) {
      throw InvalidFamilyParameter("randers needs |c| < 1, got c = " + format_number(c));
    }
    return parse("sqrt(z^2+1)+c*z", {"c"}).substitute({{"c", Expression::literal(c)}});
  }
  if (family == "unicorn") {
    const double alpha = need("alpha");
    const double beta = need("beta");
    const double k = params.contains("k") ? params.at("k") : 1.0;
    if (!(alpha > 0.0)) throw InvalidFamilyParameter("unicorn needs alpha > 0");
    if (!(k > 0.0)) throw InvalidFamilyParameter("unicorn needs k > 0");
    return parse("k*sqrt((z+alpha*beta)^2+alpha^2)*exp(beta*arctan((z+alpha*beta)/alpha))",
                 {"k", "alpha", "beta"})
        .substitute({{"k", Expression::literal(k)},
                     {"alpha", Expression::literal(alpha)},
                     {"beta", Expression::literal(beta)}});
  }
  throw InvalidFamilyParameter("unknown metric family '" + std::string(family) + "'");
}

}  // namespace finsler
