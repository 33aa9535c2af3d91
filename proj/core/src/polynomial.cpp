// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "caffine/error.hpp"
#include "caffine/geometry.hpp"

namespace caffine {

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  std::vector<int> p(perm);
  for (size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  return sign;
}

template <typename T>
Polynomial<T> leibniz(const std::vector<std::vector<Polynomial<T>>>& a) {
  const int dim = static_cast<int>(a.size());
  if (dim == 0) throw Error(ErrorCode::kInvalidInput, "determinant of an empty matrix");
  const int nvars = a[0][0].nvars();
  Polynomial<T> det(nvars);
  std::vector<int> perm(dim);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Polynomial<T> term = Polynomial<T>::constant(nvars, T(permutation_sign(perm)));
    for (int i = 0; i < dim; ++i) term = term * a[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace

RealPolynomial determinant(const std::vector<std::vector<RealPolynomial>>& a) { return leibniz(a); }
ComplexPolynomial determinant(const std::vector<std::vector<ComplexPolynomial>>& a) {
  return leibniz(a);
}

RealPolynomial real_part(const ComplexPolynomial& p) {
  RealPolynomial r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c)))
      throw Error(ErrorCode::kNumericalFailure, "polynomial has a nonzero imaginary part");
    RealPolynomial t = RealPolynomial::constant(p.nvars(), c.real());
    for (size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) t = t * RealPolynomial::variable(p.nvars(), static_cast<int>(i));
    r += t;
  }
  return r;
}

std::string to_expr_text(const RealPolynomial& p) {
  if (p.terms().empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // higher degree first reads better; ties keep map order
  std::vector<std::pair<std::vector<int>, double>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.first.begin(), a.first.end(), 0) >
           std::accumulate(b.first.begin(), b.first.end(), 0);
  });
  for (const auto& [m, c] : terms) {
    double coef = c;
    os << (first ? (coef < 0 ? "-" : "") : (coef < 0 ? " - " : " + "));
    coef = std::abs(coef);
    first = false;
    std::vector<std::string> factors;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      std::string f = "u" + std::to_string(i + 1);
      if (m[i] > 1) f += "^" + std::to_string(m[i]);
      factors.push_back(f);
    }
    const bool unit = coef == 1.0;
    if (!unit || factors.empty()) {
      os << format_double17(coef);
      if (!factors.empty()) os << "*";
    }
    for (size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

}  // namespace caffine
