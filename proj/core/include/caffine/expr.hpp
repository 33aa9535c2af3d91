// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Immersion-component expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | func '(' expr ')' | '(' expr ')'
//
// Identifiers are u1..un or parameter names; parameters become constants.
// Unary minus binds looser than '^': "-u1^2" is -(u1^2), "2^-1" is 0.5.

#ifndef CAFFINE_EXPR_HPP_
#define CAFFINE_EXPR_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "caffine/jet.hpp"

namespace caffine {

enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kExp, kLn, kSin, kCos, kAtan, kSqrt };

struct Node {
  Op op = Op::kConst;
  double value = 0.0;  // kConst
  int var = 0;         // kVar, zero-based
  std::shared_ptr<const Node> a, b;
};
using NodePtr = std::shared_ptr<const Node>;

class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int n) : root_(std::move(root)), n_(n) {}

  const NodePtr& root() const { return root_; }
  int n() const { return n_; }

  // Round-trippable text form; constants printed with 17 significant digits.
  std::string to_string() const;
  bool structurally_equal(const Expr& other) const;
  // Largest variable index used plus one (0 for constants).
  int max_var() const;

  // Builders used by symbolic composition.
  static Expr constant(double c, int n);
  static Expr variable(int var, int n);
  // Renames u_{i} -> u_{i+offset} and widens the declared variable count.
  Expr shifted(int offset, int new_n) const;

 private:
  NodePtr root_;
  int n_ = 0;
};

Expr parse(const std::string& text, int n, const std::map<std::string, double>& params = {});

// Taylor jet of e at point, order <= 4. Throws kDomainError naming the
// offending subexpression.
Jet eval_jet(const Expr& e, const std::vector<double>& point, int order);
double eval(const Expr& e, const std::vector<double>& point);

NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr);
NodePtr make_const(double c);
NodePtr make_var(int var);
std::string node_to_string(const NodePtr& n);

}  // namespace caffine

#endif  // CAFFINE_EXPR_HPP_
