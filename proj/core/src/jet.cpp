// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "caffine/error.hpp"

namespace caffine {

namespace {

// All exponent vectors of total degree d, larger leading exponents first.
void enumerate_degree(int n, int d, int pos, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (n == 0) {
    if (d == 0) out.push_back(cur);
    return;
  }
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(n, d - e, pos + 1, cur, out);
  }
}

}  // namespace

MultiIndexTable::MultiIndexTable(int n) : n_(n) {
  degree_start_.push_back(0);
  std::vector<int> cur(n, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    enumerate_degree(n, d, 0, cur, alphas_);
    degree_start_.push_back(static_cast<int>(alphas_.size()));
  }
  const int total = static_cast<int>(alphas_.size());
  degrees_.resize(total);
  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < total; ++i) {
    degrees_[i] = std::accumulate(alphas_[i].begin(), alphas_[i].end(), 0);
    lookup[alphas_[i]] = i;
  }
  shift_.assign(static_cast<size_t>(n) * total, -1);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < total; ++i) {
      std::vector<int> a = alphas_[i];
      ++a[v];
      auto it = lookup.find(a);
      if (it != lookup.end()) shift_[static_cast<size_t>(v) * total + i] = it->second;
    }
  // product pairs grouped by result index
  std::vector<std::vector<std::pair<int, int>>> by_result(total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      if (degrees_[i] + degrees_[j] > kMaxJetOrder) continue;
      std::vector<int> a = alphas_[i];
      for (int v = 0; v < n; ++v) a[v] += alphas_[j][v];
      by_result[lookup.at(a)].emplace_back(i, j);
    }
  pair_offsets_.push_back(0);
  for (auto& list : by_result) {
    pairs_.insert(pairs_.end(), list.begin(), list.end());
    pair_offsets_.push_back(static_cast<int>(pairs_.size()));
  }
}

std::shared_ptr<const MultiIndexTable> MultiIndexTable::get(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const MultiIndexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const MultiIndexTable>(n);
  cache[n] = t;
  return t;
}

int MultiIndexTable::index_of(const std::vector<int>& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) return -1;
  int idx = 0;
  for (int v = 0; v < n_; ++v) {
    if (alpha[v] < 0) return -1;
    for (int k = 0; k < alpha[v]; ++k) {
      idx = shifted(idx, v);
      if (idx < 0) return -1;
    }
  }
  return idx;
}

// --------------------------------------------------------------------- Jet

Jet::Jet(int n, int order) : n_(n), order_(order) {
  if (order < 0 || order > kMaxJetOrder)
    throw Error(ErrorCode::kOrderExceeded, "jet order must be in [0, 4]");
  table_ = MultiIndexTable::get(n);
  coeffs_.assign(table_->count(order), 0.0);
}

Jet Jet::constant(int n, int order, double c) {
  Jet j(n, order);
  j.coeffs_[0] = c;
  return j;
}

Jet Jet::variable(int n, int order, int var, double at) {
  Jet j(n, order);
  j.coeffs_[0] = at;
  if (order >= 1) j.coeffs_[1 + var] = 1.0;
  return j;
}

double Jet::coeff(const std::vector<int>& alpha) const {
  const int idx = table_->index_of(alpha);
  if (idx < 0 || idx >= size()) return 0.0;
  return coeffs_[idx];
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet out = *this;
  out.order_ = order;
  out.coeffs_.resize(table_->count(order));
  return out;
}

Jet Jet::derivative(int var) const {
  if (order_ == 0) throw Error(ErrorCode::kOrderExceeded, "derivative of an order-0 jet");
  Jet out(n_, order_ - 1);
  for (int k = 0; k < out.size(); ++k) {
    const int src = table_->shifted(k, var);
    out.coeffs_[k] = (table_->alpha(k)[var] + 1) * coeffs_[src];
  }
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (int k = 0; k < size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (int k = 0; k < size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& v : coeffs_) v *= c;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.coeffs_) v = -v;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order_, b.order_);
  Jet out(a.n_, order);
  const MultiIndexTable& t = *a.table_;
  for (int k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (auto p = t.pairs_begin(k); p != t.pairs_end(k); ++p)
      s += a.coeffs_[p->first] * b.coeffs_[p->second];
    out.coeffs_[k] = s;
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet Jet::compose(const double* derivs) const {
  // f(g0 + dg) = sum_k f^(k)(g0) / k! dg^k
  Jet dg = *this;
  dg.coeffs_[0] = 0.0;
  Jet out = Jet::constant(n_, order_, derivs[0]);
  Jet power = Jet::constant(n_, order_, 1.0);
  double fact = 1.0;
  for (int k = 1; k <= order_; ++k) {
    power = power * dg;
    fact *= k;
    const double c = derivs[k] / fact;
    if (c == 0.0) continue;
    for (int i = 0; i < out.size(); ++i) out.coeffs_[i] += c * power.coeffs_[i];
  }
  return out;
}

// ------------------------------------------------------------- functions

Jet exp(const Jet& g) {
  const double e = std::exp(g.value());
  if (!std::isfinite(e)) throw Error(ErrorCode::kDomainError, "exp overflow");
  const double d[5] = {e, e, e, e, e};
  return g.compose(d);
}

Jet log(const Jet& g) {
  const double a = g.value();
  if (!(a > 0.0)) throw Error(ErrorCode::kDomainError, "ln of non-positive value");
  const double d[5] = {std::log(a), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a),
                       -6.0 / (a * a * a * a)};
  return g.compose(d);
}

Jet sin(const Jet& g) {
  const double s = std::sin(g.value()), c = std::cos(g.value());
  const double d[5] = {s, c, -s, -c, s};
  return g.compose(d);
}

Jet cos(const Jet& g) {
  const double s = std::sin(g.value()), c = std::cos(g.value());
  const double d[5] = {c, -s, -c, s, c};
  return g.compose(d);
}

Jet atan(const Jet& g) {
  const double a = g.value();
  const double q = 1.0 + a * a;
  const double d[5] = {std::atan(a), 1.0 / q, -2.0 * a / (q * q), (6.0 * a * a - 2.0) / (q * q * q),
                       24.0 * a * (1.0 - a * a) / (q * q * q * q)};
  return g.compose(d);
}

Jet pow(const Jet& g, double p) {
  const double a = g.value();
  const bool integral = std::floor(p) == p && std::abs(p) < 1e9;
  if (integral && p >= 0) {
    // exact repeated multiplication, valid at any base
    Jet out = Jet::constant(g.n(), g.order(), 1.0);
    Jet base = g;
    long long e = static_cast<long long>(p);
    while (e > 0) {
      if (e & 1) out = out * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return out;
  }
  if (integral) {
    if (a == 0.0) throw Error(ErrorCode::kDomainError, "negative power of zero");
  } else if (!(a > 0.0) && !(a == 0.0 && g.order() == 0 && p > 0)) {
    throw Error(ErrorCode::kDomainError, "non-integer power of non-positive base");
  }
  double d[5] = {0, 0, 0, 0, 0};
  double falling = 1.0;
  for (int k = 0; k <= g.order(); ++k) {
    d[k] = falling * std::pow(a, p - k);
    falling *= (p - k);
  }
  return g.compose(d);
}

Jet reciprocal(const Jet& g) {
  if (g.value() == 0.0) throw Error(ErrorCode::kDomainError, "division by zero");
  return pow(g, -1.0);
}

Jet sqrt(const Jet& g) {
  if (g.value() < 0.0 || (g.value() == 0.0 && g.order() > 0))
    throw Error(ErrorCode::kDomainError, "sqrt of non-positive value");
  return pow(g, 0.5);
}

double partial(const Jet& j, const std::vector<int>& alpha) {
  int total = 0;
  double fact = 1.0;
  for (int a : alpha) {
    if (a < 0) throw Error(ErrorCode::kInvalidInput, "negative multi-index entry");
    total += a;
    for (int k = 2; k <= a; ++k) fact *= k;
  }
  if (static_cast<int>(alpha.size()) != j.n())
    throw Error(ErrorCode::kInvalidInput, "multi-index length does not match jet");
  if (total > j.order())
    throw Error(ErrorCode::kOrderExceeded,
                "requested derivative of order " + std::to_string(total) +
                    " from a jet of order " + std::to_string(j.order()));
  return fact * j.coeff(alpha);
}

}  // namespace caffine
