// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Sparse multivariate polynomials, just enough to expand determinants of
// matrices whose entries are affine in the chart variables.

#ifndef CAFFINE_POLYNOMIAL_HPP_
#define CAFFINE_POLYNOMIAL_HPP_

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace caffine {

template <typename T>
class Polynomial {
 public:
  using Monomial = std::vector<int>;  // exponent per variable

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, T c) {
    Polynomial p(nvars);
    if (c != T(0)) p.terms_[Monomial(nvars, 0)] = c;
    return p;
  }
  static Polynomial variable(int nvars, int var, T scale = T(1)) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[var] = 1;
    p.terms_[m] = scale;
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Monomial, T>& terms() const { return terms_; }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(ma);
        for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend Polynomial operator*(T s, Polynomial a) {
    for (auto& [m, c] : a.terms_) c *= s;
    return a;
  }

  T evaluate(const std::vector<T>& x) const {
    T sum(0);
    for (const auto& [m, c] : terms_) {
      T t = c;
      for (size_t i = 0; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      sum += t;
    }
    return sum;
  }

 private:
  void add_term(const Monomial& m, T c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != T(0)) terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second == T(0)) terms_.erase(it);
  }

  int nvars_;
  std::map<Monomial, T> terms_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

// Leibniz expansion; fine for the sizes used here (dim <= 5).
RealPolynomial determinant(const std::vector<std::vector<RealPolynomial>>& a);
ComplexPolynomial determinant(const std::vector<std::vector<ComplexPolynomial>>& a);

// Real part of a complex polynomial; throws kNumericalFailure when the
// imaginary part does not cancel.
RealPolynomial real_part(const ComplexPolynomial& p);

// DSL text over u1..un ("0" for the zero polynomial).
std::string to_expr_text(const RealPolynomial& p);

}  // namespace caffine

#endif  // CAFFINE_POLYNOMIAL_HPP_
