// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Small dense tensors and the symmetric eigen-solver used everywhere else.

#ifndef CAFFINE_LINALG_HPP_
#define CAFFINE_LINALG_HPP_

#include <vector>

#include <Eigen/Dense>

namespace caffine {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Symmetric matrix with packed storage, so (i,j) and (j,i) are the same slot.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  // Averages a and a^T. Callers that care about asymmetry check it first.
  static SymMatrix from_dense(const Mat& a);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double v) { data_[index(i, j)] = v; }

  Mat dense() const;
  bool is_positive_definite() const;
  // Number of negative eigenvalues.
  int negative_index() const;
  SymMatrix negated() const;
  double bilinear(const Vec& a, const Vec& b) const;

 private:
  int index(int i, int j) const;

  int dim_ = 0;
  std::vector<double> data_;
};

// Totally symmetric 3-tensor, storage over sorted index triples.
class Sym3Tensor {
 public:
  Sym3Tensor() = default;
  explicit Sym3Tensor(int dim);

  int dim() const { return dim_; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  void set(int i, int j, int k, double v) { data_[index(i, j, k)] = v; }
  // Frobenius norm over all n^3 entries (coordinate norm, not the h-norm).
  double full_norm() const;

 private:
  int index(int i, int j, int k) const;

  int dim_ = 0;
  std::vector<double> data_;
};

// K^k_{ij}, symmetric in the lower pair.
class MixedTensor12 {
 public:
  MixedTensor12() = default;
  explicit MixedTensor12(int dim);

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  void set(int k, int i, int j, double v) { data_[index(k, i, j)] = v; }

  // K(X,Y) as a vector.
  Vec apply(const Vec& x, const Vec& y) const;
  // Matrix of Y -> K(X,Y).
  Mat operator_of(const Vec& x) const;
  MixedTensor12 scaled(double c) const;

 private:
  int index(int k, int i, int j) const;

  int dim_ = 0;
  std::vector<double> data_;
};

struct SymEigen {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column i pairs with values[i]
};

// Cyclic Jacobi. Throws kNumericalFailure when the sweep cap is hit.
SymEigen sym_eigen(const SymMatrix& a);
SymEigen sym_eigen(const Mat& a);

// Consecutive sorted values are grouped when the gap is at most
// rel_tol * max(1, |value|).
std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<double>& values,
                                                  double rel_tol = 1e-6);

// result(i,j,k) = sum_l h(k,l) K^l_{ij}. Throws kAsymmetryError above 1e-8.
Sym3Tensor lower_index(const MixedTensor12& k, const SymMatrix& h);
// Same, also reporting the pre-symmetrization residual.
Sym3Tensor lower_index(const MixedTensor12& k, const SymMatrix& h, double* residual);

// Modified Gram-Schmidt in the h inner product; columns in, columns out.
Mat h_orthonormalize(const Mat& vectors, const SymMatrix& h);

// Flips v so that its largest-magnitude entry is positive (first one on ties).
void fix_sign(Vec& v);

// Frame e_a with h(e_a, e_b) = s_a delta_ab, built from the eigen-decomposition
// of h. For SPD h all signs are +1 and frame Frobenius norms are h-norms.
struct MetricFrame {
  Mat e;                   // columns are frame vectors in coordinates
  Mat e_inv;               // coordinates -> frame components
  std::vector<int> signs;  // h(e_a, e_a)
};
MetricFrame metric_frame(const SymMatrix& h);

// Frame components of tensors.
Mat frame_matrix(const SymMatrix& h_cov, const MetricFrame& f);
std::vector<double> frame_sym3(const Sym3Tensor& c, const MetricFrame& f);
// K^c_{ab} in the frame, flat layout [c][a][b].
std::vector<double> frame_mixed(const MixedTensor12& k, const MetricFrame& f);

}  // namespace caffine

#endif  // CAFFINE_LINALG_HPP_
