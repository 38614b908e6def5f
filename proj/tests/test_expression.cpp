#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finsler/error.hpp"
#include "finsler/expression.hpp"
#include "finsler/finite_difference.hpp"

using namespace finsler;

namespace {

Coordinates<Jet> coordinate_jets(const JetSpace& sp, const Coordinates<double>& at) {
  return {jet_var(sp, "x0", at[0]), jet_var(sp, "r", at[1]), jet_var(sp, "s", at[2]), jet_var(sp, "z", at[3])};
}

JetSpace space4(int order) { return JetSpace({"x0", "r", "s", "z"}, order); }

}  // namespace

TEST(Parse, BuildsExpectedTree) {
  Expression e = parse("sqrt(z^2+1)");
  ASSERT_EQ(e.kind(), Expression::Kind::Call);
  EXPECT_EQ(e.root().function, ElementaryFunction::Sqrt);
  const auto& add = *e.root().lhs;
  ASSERT_EQ(add.kind, Expression::Kind::Binary);
  EXPECT_EQ(add.op, BinaryOp::Add);
  EXPECT_EQ(add.lhs->op, BinaryOp::Pow);
  EXPECT_EQ(add.lhs->lhs->variable, Variable::Z);
  EXPECT_EQ(add.lhs->rhs->value, 2.0);
  EXPECT_EQ(add.rhs->value, 1.0);
}

TEST(Parse, ParameterReferences) {
  Expression e = parse("k*exp(b*arctan((z+a*b)/a))", std::set<std::string>{"k", "a", "b"});
  EXPECT_EQ(e.parameters(), (std::set<std::string>{"a", "b", "k"}));
  EXPECT_EQ(e.parameter_reference_count(), 5);
  EXPECT_TRUE(e.depends_on(Variable::Z));
  EXPECT_FALSE(e.depends_on(Variable::S));
}

TEST(Parse, Errors) {
  try {
    parse("2*+z");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(parse("2z"), SyntaxError);
  EXPECT_THROW(parse("(z"), SyntaxError);
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("z +"), SyntaxError);
  EXPECT_THROW(parse("sqrt"), SyntaxError);
  try {
    parse("z + q");
    FAIL() << "expected UnknownIdentifier";
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.name(), "q");
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse("tan(z)"), UnknownIdentifier);
}

TEST(Parse, PrecedenceAndAssociativity) {
  const Coordinates<double> at{0.0, 2.0, 3.0, 0.5};
  EXPECT_DOUBLE_EQ(evaluate(parse("r^s^2"), at), std::pow(2.0, 9.0));
  EXPECT_DOUBLE_EQ(evaluate(parse("-r^2"), at), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("r-s-1"), at), -2.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("s/r/2"), at), 0.75);
  EXPECT_DOUBLE_EQ(evaluate(parse("r^-1"), at), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse("2*r + s*z"), at), 5.5);
  EXPECT_DOUBLE_EQ(evaluate(parse(" 1.5e1 * z "), at), 7.5);
}

TEST(Parse, RoundTripIsStable) {
  const std::vector<std::string> corpus{
      "sqrt(z^2+1)",
      "-(r-s)^-2*exp(-x0)",
      "a*(b+c)/(d-a)^2^0.5",
      "sqrt((z+a*b)^2+a^2)*exp(b*arctan((z+a*b)/a))",
      "-z^2 - -r",
      "1/(r*s)/z",
      "r-(s-(z-x0))",
      "0.1*x0*z + cos(sin(log(r)))",
      "-1.25e-7*s",
  };
  const std::set<std::string> params{"a", "b", "c", "d"};
  for (const auto& text : corpus) {
    Expression e = parse(text, params);
    const std::string printed = e.to_string();
    Expression again = parse(printed, params);
    EXPECT_TRUE(again == e) << text << " -> " << printed;
    EXPECT_EQ(again.to_string(), printed);
  }
}

TEST(EvalJet, SpecExamples) {
  JetSpace sp = space4(3);
  Jet v = eval_jet(parse("z^2"), coordinate_jets(sp, {0.0, 1.0, 0.0, 2.0}));
  EXPECT_DOUBLE_EQ(v.value(), 4.0);
  EXPECT_DOUBLE_EQ(v.partial({"z"}), 4.0);

  Jet w = eval_jet(parse("sqrt(z^2+1)"), coordinate_jets(sp, {0.0, 1.0, 0.0, 0.0}));
  EXPECT_DOUBLE_EQ(w.value(), 1.0);
  EXPECT_DOUBLE_EQ(w.partial({"z"}), 0.0);
  EXPECT_DOUBLE_EQ(w.partial({"z", "z"}), 1.0);

  EXPECT_THROW(eval_jet(parse("1/(r)"), coordinate_jets(sp, {0.0, 0.0, 0.0, 1.0})), DivisionByZero);
  EXPECT_THROW(evaluate(parse("1/(r)"), {0.0, 0.0, 0.0, 1.0}), DivisionByZero);
  EXPECT_THROW(evaluate(parse("sqrt(s)"), {0.0, 1.0, -1.0, 1.0}), DomainError);
  EXPECT_THROW(evaluate(parse("s^0.5"), {0.0, 1.0, -1.0, 1.0}), DomainError);
  EXPECT_DOUBLE_EQ(evaluate(parse("s^3"), {0.0, 1.0, -2.0, 1.0}), -8.0);
}

TEST(EvalJet, OrderZeroGivesPlainValue) {
  JetSpace sp = space4(0);
  const Coordinates<double> at{0.2, 0.8, 0.1, 1.4};
  Expression e = parse("exp(x0)*sqrt(z^2+r^2)+s*z");
  Jet j = eval_jet(e, coordinate_jets(sp, at));
  EXPECT_EQ(j.coefficients().size(), 1u);
  EXPECT_DOUBLE_EQ(j.value(), evaluate(e, at));
}

TEST(EvalJet, Parameters) {
  ParameterEnv env{{"c", 0.5}};
  Expression e = parse("sqrt(z^2+1)+c*z", env);
  EXPECT_DOUBLE_EQ(evaluate(e, {0, 1, 0, 2}, env), std::sqrt(5.0) + 1.0);
  EXPECT_THROW(evaluate(e, {0, 1, 0, 2}), UnknownIdentifier);
  EXPECT_THROW(env.set("z", 1.0), Error);
  EXPECT_THROW(env.set("sqrt", 1.0), Error);
}

TEST(EvalJet, MatchesFiniteDifferencesOnRandomCorpus) {
  // 20 expressions assembled from random building blocks.
  const std::vector<std::string> atoms{"z",       "s",          "r",           "x0",
                                       "(z^2+1)", "(r^2+s^2)", "(1+0.3*x0)", "(2+s*z)"};
  const std::vector<std::string> unary{"sqrt", "exp", "log", "arctan", "sin", "cos"};
  std::mt19937_64 rng(2024);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  const Coordinates<double> at{0.3, 0.7, 0.2, 1.1};
  const std::vector<double> pt(at.begin(), at.end());
  JetSpace sp = space4(3);
  int tested = 0;
  while (tested < 20) {
    std::string text = pick(atoms) + "*" + pick(unary) + "(" + pick(atoms) + ")";
    text += (rng() % 2 ? " + " : " - ") + pick(atoms) + "^" + std::to_string(1 + rng() % 3);
    text += " / (2.5 + " + pick(unary) + "(" + pick(atoms) + "))";
    Expression e = parse(text);
    double base = 0.0;
    try {
      base = evaluate(e, at);
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(base)) continue;
    ++tested;
    Jet j = eval_jet(e, coordinate_jets(sp, at));
    auto f = [&](std::span<const double> v) { return evaluate(e, {v[0], v[1], v[2], v[3]}); };
    for (std::size_t i = 1; i < sp.size(); ++i) {
      const MultiIndex idx = sp.multi_index_at(i);
      const double exact = j.partial(idx);
      const double fd = fd_partial(f, pt, idx, 2e-2);
      EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::fabs(exact))) << text << " index " << i;
    }
  }
}

TEST(Builtin, Families) {
  EXPECT_TRUE(builtin("euclidean") == parse("sqrt(z^2+1)"));
  EXPECT_TRUE(builtin("randers", {{"c", 0.5}}) == parse("sqrt(z^2+1)+0.5*z"));
  EXPECT_THROW(builtin("randers", {{"c", 1.5}}), InvalidFamilyParameter);
  EXPECT_THROW(builtin("randers"), InvalidFamilyParameter);
  EXPECT_THROW(builtin("unicorn", {{"alpha", -1.0}, {"beta", 1.0}}), InvalidFamilyParameter);
  EXPECT_THROW(builtin("bogus"), InvalidFamilyParameter);
  Expression u = builtin("unicorn", {{"alpha", 1.0}, {"beta", 1.0}, {"k", 1.0}});
  const double z = 0.4;
  const double zeta = z + 1.0;
  EXPECT_NEAR(evaluate(u, {0, 1, 0, z}), std::sqrt(zeta * zeta + 1) * std::exp(std::atan(zeta)), 1e-14);
}
