// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "caffine/error.hpp"
#include "caffine/expr.hpp"
#include "caffine/jet.hpp"

namespace caffine {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kNumericalFailure;
}

// Reference partial derivatives from tests/oracles/freeze_oracles.py.
TEST(Jet, MatchesSymbolicDerivatives) {
  const Expr e = parse("sqrt(1 - u1^2 - u2^2) * exp(u1)", 2);
  const Jet j = eval_jet(e, {0.1, 0.2}, 4);
  const std::vector<std::pair<std::vector<int>, double>> ref{
      {{0, 0}, 1.0771873654347053017},   {{1, 0}, 0.96379922170473632260},
      {{0, 1}, -0.22677628745993795826}, {{2, 0}, -0.29540595340176128773},
      {{1, 1}, -0.25064747561361563807}, {{0, 2}, -1.1816238136070451509},
      {{3, 0}, -3.0622651171615860444},  {{2, 1}, -0.52076881524733675179},
      {{1, 3}, -0.98830686466722050565}, {{0, 4}, -4.5170107002152972528},
      {{2, 2}, -2.8404399521753506243},
  };
  for (const auto& [alpha, want] : ref) {
    EXPECT_NEAR(partial(j, alpha), want, 1e-12 * (1 + std::abs(want))) << alpha[0] << "," << alpha[1];
  }
}

TEST(Jet, ProductRuleAndDivision) {
  const Jet x = Jet::variable(2, 4, 0, 0.3);
  const Jet y = Jet::variable(2, 4, 1, -0.7);
  const Jet q = (x * y + x) / (Jet::constant(2, 4, 2.0) + y * y);
  const Jet back = q * (Jet::constant(2, 4, 2.0) + y * y);
  const Jet want = x * y + x;
  for (int i = 0; i < want.size(); ++i) EXPECT_NEAR(back[i], want[i], 1e-13);
}

TEST(Jet, ElementaryIdentities) {
  const Jet x = Jet::variable(1, 4, 0, 0.4);
  const Jet one = exp(log(x + Jet::constant(1, 4, 1.0))) - x;
  EXPECT_NEAR(one.value(), 1.0, 1e-14);
  for (int i = 1; i < one.size(); ++i) EXPECT_NEAR(one[i], 0.0, 1e-13);
  const Jet pyth = sin(x) * sin(x) + cos(x) * cos(x);
  EXPECT_NEAR(pyth.value(), 1.0, 1e-14);
  for (int i = 1; i < pyth.size(); ++i) EXPECT_NEAR(pyth[i], 0.0, 1e-13);
  const Jet s = sqrt(x) * sqrt(x) - x;
  for (int i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], 0.0, 1e-13);
  // d/dx atan = 1 / (1 + x^2)
  EXPECT_NEAR(partial(atan(x), {1}), 1.0 / 1.16, 1e-14);
  EXPECT_NEAR(partial(pow(x, -2.0), {2}), 6.0 / std::pow(0.4, 4), 1e-10);
}

TEST(Jet, DerivativeLowersOrder) {
  const Jet x = Jet::variable(2, 4, 0, 1.5);
  const Jet y = Jet::variable(2, 4, 1, 0.5);
  const Jet f = x * x * y;
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 3);
  EXPECT_NEAR(fx.value(), 2 * 1.5 * 0.5, 1e-14);
  EXPECT_EQ(code_of([&] { partial(fx, {2, 2}); }), ErrorCode::kOrderExceeded);
}

TEST(Jet, DomainErrors) {
  const Jet x = Jet::variable(1, 2, 0, -1.0);
  EXPECT_EQ(code_of([&] { log(x); }), ErrorCode::kDomainError);
  EXPECT_EQ(code_of([&] { sqrt(x); }), ErrorCode::kDomainError);
  EXPECT_EQ(code_of([&] { pow(x, 0.5); }), ErrorCode::kDomainError);
  EXPECT_NO_THROW(pow(x, 3.0));
}

TEST(Parse, PrecedenceOfUnaryMinusAndPower) {
  EXPECT_DOUBLE_EQ(eval(parse("-u1^2", 1), {3.0}), -9.0);
  EXPECT_DOUBLE_EQ(eval(parse("2^-1", 0), {}), 0.5);
  EXPECT_DOUBLE_EQ(eval(parse("2^3^2", 0), {}), 512.0);
  EXPECT_DOUBLE_EQ(eval(parse("1 - 2 - 3", 0), {}), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("8 / 2 / 2", 0), {}), 2.0);
  EXPECT_DOUBLE_EQ(eval(parse("--u1", 1), {2.0}), 2.0);
}

TEST(Parse, ParametersBecomeConstants) {
  const Expr e = parse("a*u1 + b", 1, {{"a", 2.0}, {"b", -1.0}});
  EXPECT_DOUBLE_EQ(eval(e, {4.0}), 7.0);
}

TEST(Parse, Errors) {
  EXPECT_EQ(code_of([] { parse("u1 +", 1); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse("(u1", 1); }), ErrorCode::kSyntaxError);
  EXPECT_EQ(code_of([] { parse("u3", 2); }), ErrorCode::kUnknownIdentifier);
  EXPECT_EQ(code_of([] { parse("cosh(u1)", 1); }), ErrorCode::kUnknownIdentifier);
  EXPECT_EQ(code_of([] { parse("q*u1", 1); }), ErrorCode::kUnknownIdentifier);
}

TEST(Parse, EvaluationDomainErrorNamesSubexpression) {
  const Expr e = parse("u1 + ln(u2)", 2);
  try {
    eval_jet(e, {1.0, -1.0}, 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kDomainError);
    EXPECT_NE(std::string(err.what()).find("ln"), std::string::npos) << err.what();
  }
}

// Printing and re-parsing preserves the tree.
TEST(Expr, RoundTripRandomTrees) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> leaves{"u1", "u2", "3", "0.25", "1e-3", "-2"};
  const std::vector<std::string> funcs{"exp", "sin", "cos", "atan"};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 0);
    switch (pick(rng)) {
      case 0: return leaves[rng() % leaves.size()];
      case 1: return "(" + gen(depth - 1) + " + " + gen(depth - 1) + ")";
      case 2: return "(" + gen(depth - 1) + " - " + gen(depth - 1) + ")";
      case 3: return gen(depth - 1) + " * " + gen(depth - 1);
      case 4: return "-" + gen(depth - 1);
      case 5: return "(" + gen(depth - 1) + ")^2";
      case 6: return funcs[rng() % funcs.size()] + "(" + gen(depth - 1) + ")";
      default: return "(" + gen(depth - 1) + ") / (2 + u1^2)";
    }
  };
  for (int t = 0; t < 200; ++t) {
    const std::string text = gen(4);
    const Expr e = parse(text, 2);
    const Expr back = parse(e.to_string(), 2);
    EXPECT_TRUE(e.structurally_equal(back)) << text << " -> " << e.to_string();
    EXPECT_EQ(back.to_string(), e.to_string());
    const std::vector<double> p{0.3, -0.6};
    EXPECT_NEAR(eval(e, p), eval(back, p), 1e-12 * (1 + std::abs(eval(e, p))));
  }
}

TEST(Expr, ShiftedRenamesVariables) {
  const Expr e = parse("u1 * u2", 2);
  const Expr s = e.shifted(1, 3);
  EXPECT_EQ(s.n(), 3);
  EXPECT_EQ(s.max_var(), 3);
  EXPECT_DOUBLE_EQ(eval(s, {100.0, 2.0, 5.0}), 10.0);
}

}  // namespace
}  // namespace caffine
