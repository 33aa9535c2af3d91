// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/jordan.hpp"

#include <cmath>
#include <vector>

#include "caffine/error.hpp"
#include "caffine/octonion.hpp"

namespace caffine {

int field_dim(Field f) {
  switch (f) {
    case Field::kReal: return 1;
    case Field::kComplex: return 2;
    case Field::kQuaternion: return 4;
    case Field::kOctonion: return 8;
  }
  return 1;
}

const char* field_name(Field f) {
  switch (f) {
    case Field::kReal: return "R";
    case Field::kComplex: return "C";
    case Field::kQuaternion: return "H";
    case Field::kOctonion: return "O";
  }
  return "?";
}

namespace {

// k x k matrix over the octonions, row major. Sub-algebras use a prefix of the units.
using OMatrix = std::vector<Octonion>;

OMatrix omul(const OMatrix& a, const OMatrix& b, int k) {
  OMatrix r(static_cast<size_t>(k) * k, Octonion{});
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Octonion& acc = r[i * k + j];
      for (int l = 0; l < k; ++l) {
        const Octonion p = octonion_product(a[i * k + l], b[l * k + j]);
        for (int c = 0; c < 8; ++c) acc[c] += p[c];
      }
    }
  return r;
}

OMatrix jordan(const OMatrix& a, const OMatrix& b, int k) {
  OMatrix x = omul(a, b, k), y = omul(b, a, k);
  for (size_t i = 0; i < x.size(); ++i)
    for (int c = 0; c < 8; ++c) x[i][c] = 0.5 * (x[i][c] + y[i][c]);
  return x;
}

double re_trace(const OMatrix& a, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += a[i * k + i][0];
  return s;
}

}  // namespace

PointTensors jordan_tensor(Field field, int k) {
  if (k < 3) throw Error(ErrorCode::kInvalidParameters, "Herm(k, F) needs k >= 3");
  if (field == Field::kOctonion && k != 3)
    throw Error(ErrorCode::kInvalidParameters, "octonionic Hermitian matrices form a Jordan algebra only for k = 3");
  const int d = field_dim(field);
  std::vector<OMatrix> basis;
  // diagonal: diag(1,...,1,-l,0,...)/sqrt(l(l+1))
  for (int l = 1; l < k; ++l) {
    OMatrix m(static_cast<size_t>(k) * k, Octonion{});
    const double s = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) m[i * k + i][0] = s;
    m[l * k + l][0] = -l * s;
    basis.push_back(m);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int u = 0; u < d; ++u) {
        OMatrix m(static_cast<size_t>(k) * k, Octonion{});
        const double s = 1.0 / std::sqrt(2.0);
        m[i * k + j][u] = s;
        m[j * k + i][u] = u == 0 ? s : -s;  // conjugate
        basis.push_back(m);
      }
  const int n = static_cast<int>(basis.size());
  PointTensors t;
  t.name = std::string("Herm(") + std::to_string(k) + "," + field_name(field) + ")";
  t.epsilon = -1;
  t.h = SymMatrix(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) t.h.set(a, b, re_trace(jordan(basis[a], basis[b], k), k));
  t.K = MixedTensor12(n);
  const double scale = std::sqrt(static_cast<double>(k));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const OMatrix ab = jordan(basis[a], basis[b], k);
      for (int c = 0; c < n; ++c) t.K.set(c, a, b, scale * re_trace(jordan(ab, basis[c], k), k));
    }
  return t;
}

IsotropicMap synthetic_isotropic_map(double lambda1, int eps, int k0, int p) {
  if (k0 < 1) throw Error(ErrorCode::kInvalidParameters, "k0 must be positive");
  const double disc = lambda1 * lambda1 - 4.0 * eps;
  if (!(lambda1 > 0) || !(disc > 0))
    throw Error(ErrorCode::kInvalidParameters, "need lambda1 > 0 and lambda1^2 - 4 eps > 0");
  // block algebra: units used for D2 vectors and for products
  std::vector<int> units;
  int product_dim = 0;
  switch (p) {
    case 0: units = {0}; product_dim = 1; break;
    case 1: units = {0, 1}; product_dim = 2; break;
    case 2: units = {1, 2, 3}; product_dim = 4; break;
    case 3: units = {0, 1, 2, 3}; product_dim = 4; break;
    case 7: units = {0, 1, 2, 3, 4, 5, 6, 7}; product_dim = 8; break;
    default: throw Error(ErrorCode::kInvalidParameters, "synthetic blocks exist for p in {0,1,2,3,7}");
  }
  IsotropicMap L;
  L.lambda1 = lambda1;
  L.eps = eps;
  L.eta = 0.5 * std::sqrt(disc);
  L.mu = 0.5 * lambda1 - L.eta;
  fill_constants(L);
  const int b = 1 + p;
  const int k = k0 * b;
  const int pairs = k0 * (k0 - 1) / 2;
  const int w0 = 1 + k;                     // start of the diagonal targets
  const int c0 = w0 + k0;                   // start of the pair copies
  const int ambient = c0 + pairs * product_dim;
  L.h = SymMatrix::identity(ambient);
  L.e1 = Vec::Unit(ambient, 0);
  L.d2 = Mat::Zero(ambient, k);
  for (int i = 0; i < k; ++i) L.d2(1 + i, i) = 1.0;

  // w_l with Gram sigma on the diagonal and sigma - 2 tau off it
  Mat gram = Mat::Constant(k0, k0, L.sigma - 2.0 * L.tau);
  gram.diagonal().setConstant(L.sigma);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw Error(ErrorCode::kInvalidParameters, "lambda1 + (k0-1) mu < 0: no isotropic map with these blocks");
  const Mat w = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  // row l of w are the coordinates of w_l in the target span

  L.values.assign(static_cast<size_t>(k) * k, Vec::Zero(ambient));
  auto pair_index = [&](int l, int m) {  // l < m
    return l * k0 - l * (l + 1) / 2 + (m - l - 1);
  };
  const double st = std::sqrt(L.tau);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int li = i / b, lj = j / b;
      Vec& out = L.values[static_cast<size_t>(i) * k + j];
      if (li == lj) {
        if (i == j)
          for (int q = 0; q < k0; ++q) out(w0 + q) = w(li, q);
        continue;
      }
      // x in the lower block, y in the higher one: sqrt(tau) * conj(x) y
      const int xi = li < lj ? i : j, yi = li < lj ? j : i;
      Octonion x{}, y{};
      x[units[xi % b]] = 1.0;
      y[units[yi % b]] = 1.0;
      const Octonion prod = octonion_product(conjugate(x), y);
      const int base = c0 + pair_index(std::min(li, lj), std::max(li, lj)) * product_dim;
      for (int c = 0; c < product_dim; ++c) out(base + c) = st * prod[c];
    }
  return L;
}

PointTensors half_branch_tensor(int n, double lambda1, int eps) {
  if (n < 2) throw Error(ErrorCode::kInvalidParameters, "n must be at least 2");
  PointTensors t;
  t.h = SymMatrix::identity(n);
  t.epsilon = eps;
  t.K = MixedTensor12(n);
  t.K.set(0, 0, 0, lambda1);
  for (int i = 1; i < n; ++i) {
    t.K.set(i, 0, i, 0.5 * lambda1);
    t.K.set(0, i, i, 0.5 * lambda1);
  }
  return t;
}

PointTensors case_b_tensor(int n) {
  PointTensors t = half_branch_tensor(n, 2.0, 1);
  t.name = "caseB(" + std::to_string(n) + ")";
  return t;
}

PointTensors cn_tensor(int n) {
  PointTensors t = half_branch_tensor(n, 1.0, -1);
  t.name = "Cn(" + std::to_string(n) + ")";
  return t;
}

}  // namespace caffine
