// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "caffine/error.hpp"

namespace caffine {

// ---------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * (dim + 1) / 2, 0.0) {}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_dense(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  return m;
}

int SymMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

Mat SymMatrix::dense() const {
  Mat a(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) a(i, j) = (*this)(i, j);
  return a;
}

bool SymMatrix::is_positive_definite() const {
  if (dim_ == 0) return false;
  Eigen::LLT<Mat> llt(dense());
  if (llt.info() != Eigen::Success) return false;
  // LLT accepts some numerically semidefinite inputs; demand a clear margin.
  const SymEigen es = sym_eigen(*this);
  const double scale = std::max(1.0, std::abs(es.values.back()));
  return es.values.front() > 1e-12 * scale;
}

int SymMatrix::negative_index() const {
  const SymEigen es = sym_eigen(*this);
  return static_cast<int>(std::count_if(es.values.begin(), es.values.end(),
                                        [](double v) { return v < 0.0; }));
}

SymMatrix SymMatrix::negated() const {
  SymMatrix m = *this;
  for (double& v : m.data_) v = -v;
  return m;
}

double SymMatrix::bilinear(const Vec& a, const Vec& b) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s += a(i) * (*this)(i, j) * b(j);
  return s;
}

// --------------------------------------------------------------- Sym3Tensor

Sym3Tensor::Sym3Tensor(int dim)
    : dim_(dim), data_(static_cast<size_t>(dim) * (dim + 1) * (dim + 2) / 6, 0.0) {}

int Sym3Tensor::index(int i, int j, int k) const {
  std::array<int, 3> s{i, j, k};
  std::sort(s.begin(), s.end());
  // combinatorial number system on sorted triples
  const int a = s[0], b = s[1] + 1, c = s[2] + 2;
  return a + b * (b - 1) / 2 + c * (c - 1) * (c - 2) / 6;
}

double Sym3Tensor::full_norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) s += (*this)(i, j, k) * (*this)(i, j, k);
  return std::sqrt(s);
}

// ------------------------------------------------------------ MixedTensor12

MixedTensor12::MixedTensor12(int dim)
    : dim_(dim), data_(static_cast<size_t>(dim) * dim * (dim + 1) / 2, 0.0) {}

int MixedTensor12::index(int k, int i, int j) const {
  if (i > j) std::swap(i, j);
  const int pair = i * dim_ - i * (i - 1) / 2 + (j - i);
  return k * (dim_ * (dim_ + 1) / 2) + pair;
}

Vec MixedTensor12::apply(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * x(i) * y(j);
    }
    out(k) = s;
  }
  return out;
}

Mat MixedTensor12::operator_of(const Vec& x) const {
  Mat m = Mat::Zero(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += (*this)(k, i, j) * x(i);
      m(k, j) = s;
    }
  return m;
}

MixedTensor12 MixedTensor12::scaled(double c) const {
  MixedTensor12 out = *this;
  for (double& v : out.data_) v *= c;
  return out;
}

// ------------------------------------------------------------------- eigen

void fix_sign(Vec& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  if (v.size() > 0 && v(best) < 0.0) v = -v;
}

SymEigen sym_eigen(const Mat& input) {
  const int n = static_cast<int>(input.rows());
  Mat a = 0.5 * (input + input.transpose());
  Mat v = Mat::Identity(n, n);
  const double fro = a.norm();
  constexpr int kMaxSweeps = 100;

  bool converged = (n <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-17 * fro || off == 0.0) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        // after a few sweeps, drop entries below the diagonal's resolution
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) > 1e-14 * std::max(1.0, fro))
      throw Error(ErrorCode::kNumericalFailure, "Jacobi eigen-solver did not converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    Vec col = v.col(order[i]);
    fix_sign(col);
    out.vectors.col(i) = col;
  }
  return out;
}

SymEigen sym_eigen(const SymMatrix& a) { return sym_eigen(a.dense()); }

std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<double>& values,
                                                  double rel_tol) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (!groups.empty()) {
      const double prev = values[i - 1];
      const double scale = std::max({1.0, std::abs(prev), std::abs(values[i])});
      if (values[i] - prev <= rel_tol * scale) {
        groups.back().push_back(i);
        continue;
      }
    }
    groups.push_back({i});
  }
  return groups;
}

// ----------------------------------------------------------------- tensors

Sym3Tensor lower_index(const MixedTensor12& k, const SymMatrix& h, double* residual) {
  const int n = k.dim();
  if (h.dim() != n) throw Error(ErrorCode::kInvalidInput, "lower_index: dimension mismatch");
  std::vector<double> full(static_cast<size_t>(n) * n * n);
  auto at = [n](int i, int j, int l) { return (static_cast<size_t>(i) * n + j) * n + l; };
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += h(l, m) * k(m, i, j);
        full[at(i, j, l)] = s;
        scale = std::max(scale, std::abs(s));
      }
  Sym3Tensor out(n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = j; l < n; ++l) {
        const double vals[6] = {full[at(i, j, l)], full[at(i, l, j)], full[at(j, i, l)],
                                full[at(j, l, i)], full[at(l, i, j)], full[at(l, j, i)]};
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= 6.0;
        for (double v : vals) worst = std::max(worst, std::abs(v - mean));
        out.set(i, j, l, mean);
      }
  if (residual != nullptr) *residual = worst;
  if (worst > 1e-8 * std::max(1.0, scale))
    throw Error(ErrorCode::kAsymmetryError,
                "lowered difference tensor is not symmetric; (h, K) pair is inconsistent");
  return out;
}

Sym3Tensor lower_index(const MixedTensor12& k, const SymMatrix& h) {
  return lower_index(k, h, nullptr);
}

Mat h_orthonormalize(const Mat& vectors, const SymMatrix& h) {
  const Mat hd = h.dense();
  Mat out = vectors;
  for (int c = 0; c < out.cols(); ++c) {
    Vec w = out.col(c);
    const double orig = std::sqrt(std::abs(w.dot(hd * w)));
    for (int pass = 0; pass < 2; ++pass)  // second pass cleans rounding
      for (int b = 0; b < c; ++b) w -= out.col(b).dot(hd * w) * out.col(b);
    const double nn = w.dot(hd * w);
    if (!(nn > 0.0) || std::sqrt(nn) < 1e-10 * std::max(orig, 1e-300))
      throw Error(ErrorCode::kRankDeficient, "h_orthonormalize: vectors are linearly dependent");
    out.col(c) = w / std::sqrt(nn);
  }
  return out;
}

MetricFrame metric_frame(const SymMatrix& h) {
  const int n = h.dim();
  const SymEigen es = sym_eigen(h);
  double scale = 0.0;
  for (double v : es.values) scale = std::max(scale, std::abs(v));
  MetricFrame f;
  f.e.resize(n, n);
  f.e_inv.resize(n, n);
  f.signs.resize(n);
  for (int a = 0; a < n; ++a) {
    const double lam = es.values[a];
    if (!(std::abs(lam) > 1e-12 * scale))
      throw Error(ErrorCode::kDegenerateMetric, "metric is singular");
    const double r = std::sqrt(std::abs(lam));
    f.e.col(a) = es.vectors.col(a) / r;
    f.e_inv.row(a) = es.vectors.col(a).transpose() * r;
    f.signs[a] = lam > 0 ? 1 : -1;
  }
  return f;
}

Mat frame_matrix(const SymMatrix& h_cov, const MetricFrame& f) {
  return f.e.transpose() * h_cov.dense() * f.e;
}

std::vector<double> frame_sym3(const Sym3Tensor& c, const MetricFrame& f) {
  const int n = c.dim();
  const size_t nn = static_cast<size_t>(n);
  std::vector<double> t1(nn * nn * nn), t2(nn * nn * nn), t3(nn * nn * nn);
  // contract one slot at a time: O(n^4)
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c(i, j, k) * f.e(i, a);
        t1[(a * nn + j) * nn + k] = s;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += t1[(a * nn + j) * nn + k] * f.e(j, b);
        t2[(a * nn + b) * nn + k] = s;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += t2[(a * nn + b) * nn + k] * f.e(k, d);
        t3[(a * nn + b) * nn + d] = s;
      }
  return t3;
}

std::vector<double> frame_mixed(const MixedTensor12& k, const MetricFrame& f) {
  const int n = k.dim();
  const size_t nn = static_cast<size_t>(n);
  std::vector<double> t1(nn * nn * nn), t2(nn * nn * nn), t3(nn * nn * nn);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += f.e_inv(c, m) * k(m, i, j);
        t1[(c * nn + i) * nn + j] = s;
      }
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += t1[(c * nn + i) * nn + j] * f.e(i, a);
        t2[(c * nn + a) * nn + j] = s;
      }
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += t2[(c * nn + a) * nn + j] * f.e(j, b);
        t3[(c * nn + a) * nn + b] = s;
      }
  return t3;
}

}  // namespace caffine
