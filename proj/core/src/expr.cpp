// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "caffine/error.hpp"

namespace caffine {

NodePtr make_node(Op op, NodePtr a, NodePtr b) {
  if (op == Op::kNeg && a && a->op == Op::kConst) return make_const(-a->value);
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = c;
  return n;
}

NodePtr make_var(int var) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->var = var;
  return n;
}

namespace {

const char* func_name(Op op) {
  switch (op) {
    case Op::kExp: return "exp";
    case Op::kLn: return "ln";
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kAtan: return "atan";
    case Op::kSqrt: return "sqrt";
    default: return nullptr;
  }
}

bool is_func(Op op) { return func_name(op) != nullptr; }

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Printing precedence: 1 sum, 2 product, 3 unary minus, 4 power, 5 atom.
int level(const NodePtr& n) {
  switch (n->op) {
    case Op::kAdd:
    case Op::kSub: return 1;
    case Op::kMul:
    case Op::kDiv: return 2;
    case Op::kNeg: return 3;
    case Op::kPow: return 4;
    case Op::kConst: return (n->value < 0 || std::signbit(n->value)) ? 3 : 5;
    default: return 5;
  }
}

std::string wrap(const NodePtr& n, int min_level) {
  std::string s = node_to_string(n);
  return level(n) >= min_level ? s : "(" + s + ")";
}

bool has_var(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::kVar) return true;
  return has_var(n->a) || has_var(n->b);
}

// -------------------------------------------------------------- parser

class Parser {
 public:
  Parser(const std::string& text, int n, const std::map<std::string, double>& params)
      : s_(text), n_(n), params_(params) {}

  NodePtr parse_all() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kSyntaxError, msg + " at position " + std::to_string(pos_),
                "position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_node(Op::kAdd, lhs, term());
      else if (accept('-')) lhs = make_node(Op::kSub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = make_node(Op::kMul, lhs, factor());
      else if (accept('/')) lhs = make_node(Op::kDiv, lhs, factor());
      else return lhs;
    }
  }

  // Unary minus binds looser than '^': -x^2 is -(x^2); exponents may be signed.
  NodePtr factor() {
    if (accept('-')) return make_node(Op::kNeg, factor());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_node(Op::kPow, base, factor());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start + 1 && s_[start] == '.') fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    return make_const(std::strtod(s_.substr(start, pos_ - start).c_str(), nullptr));
  }

  NodePtr identifier() {
    const size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    static const std::map<std::string, Op> funcs = {{"exp", Op::kExp}, {"ln", Op::kLn},
                                                    {"sin", Op::kSin}, {"cos", Op::kCos},
                                                    {"atan", Op::kAtan}, {"sqrt", Op::kSqrt}};
    auto f = funcs.find(id);
    if (f != funcs.end()) {
      if (!accept('(')) fail("expected '(' after " + id);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make_node(f->second, arg);
    }
    if (id.size() > 1 && id[0] == 'u' &&
        id.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long k = std::strtol(id.c_str() + 1, nullptr, 10);
      if (k < 1 || k > n_)
        throw Error(ErrorCode::kUnknownIdentifier,
                    "variable " + id + " out of range for n=" + std::to_string(n_),
                    "position " + std::to_string(start));
      return make_var(static_cast<int>(k - 1));
    }
    auto p = params_.find(id);
    if (p == params_.end())
      throw Error(ErrorCode::kUnknownIdentifier, "unknown identifier '" + id + "'",
                  "position " + std::to_string(start));
    if (!std::isfinite(p->second))
      throw Error(ErrorCode::kInvalidParameters, "parameter '" + id + "' is not finite");
    return make_const(p->second);
  }

  const std::string& s_;
  size_t pos_ = 0;
  int n_;
  const std::map<std::string, double>& params_;
};

// ----------------------------------------------------------- evaluation

[[noreturn]] void domain_fail(const Error& e, const NodePtr& n) {
  throw Error(ErrorCode::kDomainError, std::string(e.what()) + " in '" + node_to_string(n) + "'",
              node_to_string(n));
}

double scalar(const NodePtr& n, const std::vector<double>& x) {
  switch (n->op) {
    case Op::kConst: return n->value;
    case Op::kVar: return x[n->var];
    case Op::kAdd: return scalar(n->a, x) + scalar(n->b, x);
    case Op::kSub: return scalar(n->a, x) - scalar(n->b, x);
    case Op::kMul: return scalar(n->a, x) * scalar(n->b, x);
    case Op::kNeg: return -scalar(n->a, x);
    default: break;
  }
  // the remaining ops share domain rules with the jet path
  return eval_jet(Expr(n, static_cast<int>(x.size())), x, 0).value();
}

Jet jet(const NodePtr& n, const std::vector<double>& x, int order) {
  const int nv = static_cast<int>(x.size());
  switch (n->op) {
    case Op::kConst: return Jet::constant(nv, order, n->value);
    case Op::kVar: return Jet::variable(nv, order, n->var, x[n->var]);
    case Op::kAdd: return jet(n->a, x, order) + jet(n->b, x, order);
    case Op::kSub: return jet(n->a, x, order) - jet(n->b, x, order);
    case Op::kMul: return jet(n->a, x, order) * jet(n->b, x, order);
    case Op::kNeg: return -jet(n->a, x, order);
    case Op::kDiv: {
      Jet den = jet(n->b, x, order);
      if (den.value() == 0.0) throw Error(ErrorCode::kDomainError, "division by zero in '" + node_to_string(n) + "'", node_to_string(n));
      return jet(n->a, x, order) * reciprocal(den);
    }
    case Op::kPow: {
      Jet base = jet(n->a, x, order);
      try {
        if (!has_var(n->b)) return pow(base, scalar(n->b, x));
        if (!(base.value() > 0.0))
          throw Error(ErrorCode::kDomainError, "variable exponent needs a positive base");
        return exp(jet(n->b, x, order) * log(base));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDomainError) throw;
        domain_fail(e, n);
      }
    }
    default: break;
  }
  Jet arg = jet(n->a, x, order);
  try {
    switch (n->op) {
      case Op::kExp: return exp(arg);
      case Op::kLn: return log(arg);
      case Op::kSin: return sin(arg);
      case Op::kCos: return cos(arg);
      case Op::kAtan: return atan(arg);
      case Op::kSqrt: return sqrt(arg);
      default: break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDomainError) throw;
    domain_fail(e, n);
  }
  throw Error(ErrorCode::kNumericalFailure, "corrupt expression tree");
}

bool equal_nodes(const NodePtr& x, const NodePtr& y) {
  if (!x || !y) return !x && !y;
  if (x->op != y->op) return false;
  if (x->op == Op::kConst) return x->value == y->value;
  if (x->op == Op::kVar) return x->var == y->var;
  return equal_nodes(x->a, y->a) && equal_nodes(x->b, y->b);
}

int max_var_of(const NodePtr& n) {
  if (!n) return 0;
  if (n->op == Op::kVar) return n->var + 1;
  return std::max(max_var_of(n->a), max_var_of(n->b));
}

NodePtr shift_vars(const NodePtr& n, int offset) {
  if (!n) return n;
  if (n->op == Op::kVar) return make_var(n->var + offset);
  if (n->op == Op::kConst) return n;
  return make_node(n->op, shift_vars(n->a, offset), shift_vars(n->b, offset));
}

}  // namespace

std::string node_to_string(const NodePtr& n) {
  switch (n->op) {
    case Op::kConst: return format_number(n->value);
    case Op::kVar: return "u" + std::to_string(n->var + 1);
    case Op::kAdd: return wrap(n->a, 1) + " + " + wrap(n->b, 2);
    case Op::kSub: return wrap(n->a, 1) + " - " + wrap(n->b, 2);
    case Op::kMul: return wrap(n->a, 2) + "*" + wrap(n->b, 3);
    case Op::kDiv: return wrap(n->a, 2) + "/" + wrap(n->b, 3);
    case Op::kPow: return wrap(n->a, 5) + "^" + wrap(n->b, 3);
    case Op::kNeg: return "-" + wrap(n->a, 3);
    default: break;
  }
  if (is_func(n->op)) return std::string(func_name(n->op)) + "(" + node_to_string(n->a) + ")";
  return "?";
}

std::string Expr::to_string() const { return node_to_string(root_); }

bool Expr::structurally_equal(const Expr& other) const { return equal_nodes(root_, other.root_); }

int Expr::max_var() const { return max_var_of(root_); }

Expr Expr::constant(double c, int n) { return Expr(make_const(c), n); }

Expr Expr::variable(int var, int n) { return Expr(make_var(var), n); }

Expr Expr::shifted(int offset, int new_n) const { return Expr(shift_vars(root_, offset), new_n); }

Expr parse(const std::string& text, int n, const std::map<std::string, double>& params) {
  Parser p(text, n, params);
  return Expr(p.parse_all(), n);
}

Jet eval_jet(const Expr& e, const std::vector<double>& point, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw Error(ErrorCode::kOrderExceeded, "jet order must be in [0, 4]");
  if (static_cast<int>(point.size()) < e.max_var())
    throw Error(ErrorCode::kInvalidInput, "point has fewer coordinates than the expression uses");
  return jet(e.root(), point, order);
}

double eval(const Expr& e, const std::vector<double>& point) { return scalar(e.root(), point); }

}  // namespace caffine
