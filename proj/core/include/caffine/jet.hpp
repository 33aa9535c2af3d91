// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Truncated multivariate Taylor polynomials (order <= 4).
//
// Coefficients are f_alpha = d^alpha f / alpha! in graded lexicographic order:
// degree first, then larger exponent of the earlier variable first. The layout
// for order d is a prefix of the layout for order 4, so truncation is a resize.

#ifndef CAFFINE_JET_HPP_
#define CAFFINE_JET_HPP_

#include <memory>
#include <vector>

namespace caffine {

inline constexpr int kMaxJetOrder = 4;

class MultiIndexTable {
 public:
  static std::shared_ptr<const MultiIndexTable> get(int n);

  int n() const { return n_; }
  // number of multi-indices with |alpha| <= order
  int count(int order) const { return degree_start_[order + 1]; }
  const std::vector<int>& alpha(int idx) const { return alphas_[idx]; }
  int degree(int idx) const { return degrees_[idx]; }
  // -1 when absent or |alpha| > 4
  int index_of(const std::vector<int>& alpha) const;
  // index of alpha(idx) + e_var, or -1 beyond order 4
  int shifted(int idx, int var) const { return shift_[static_cast<size_t>(var) * alphas_.size() + idx]; }

  // Pairs (i, j) with alpha_i + alpha_j = alpha_k, for k in [0, count(4)).
  const std::pair<int, int>* pairs_begin(int k) const { return pairs_.data() + pair_offsets_[k]; }
  const std::pair<int, int>* pairs_end(int k) const { return pairs_.data() + pair_offsets_[k + 1]; }

  explicit MultiIndexTable(int n);

 private:
  int n_;
  std::vector<std::vector<int>> alphas_;
  std::vector<int> degrees_;
  std::vector<int> degree_start_;
  std::vector<int> shift_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> pair_offsets_;
};

class Jet {
 public:
  Jet() = default;
  Jet(int n, int order);

  static Jet constant(int n, int order, double c);
  static Jet variable(int n, int order, int var, double at);

  int n() const { return n_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double value() const { return coeffs_[0]; }
  double& operator[](int idx) { return coeffs_[idx]; }
  double operator[](int idx) const { return coeffs_[idx]; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const MultiIndexTable& table() const { return *table_; }
  // Taylor coefficient of alpha (0 if |alpha| > order).
  double coeff(const std::vector<int>& alpha) const;

  Jet truncated(int order) const;
  // d/du_var, one order lower.
  Jet derivative(int var) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double c);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(const Jet& a, const Jet& b);

  // f(g) from derivs[k] = f^(k)(g.value()), k = 0..order.
  Jet compose(const double* derivs) const;

 private:
  int n_ = 0;
  int order_ = 0;
  std::shared_ptr<const MultiIndexTable> table_;
  std::vector<double> coeffs_;
};

// Elementary functions; each throws kDomainError outside its smooth domain.
Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet atan(const Jet& g);
Jet sqrt(const Jet& g);
Jet reciprocal(const Jet& g);
Jet pow(const Jet& g, double p);  // integer p: any nonzero base; else base > 0

// alpha! * coeff(alpha). Throws kOrderExceeded if |alpha| > order.
double partial(const Jet& j, const std::vector<int>& alpha);

}  // namespace caffine

#endif  // CAFFINE_JET_HPP_
