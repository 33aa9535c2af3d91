// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "caffine/error.hpp"
#include "caffine/jordan.hpp"
#include "caffine/linalg.hpp"
#include "caffine/octonion.hpp"

namespace caffine {
namespace {

Octonion unit(int i) {
  Octonion o{};
  o[i] = 1.0;
  return o;
}

Octonion random_octonion(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Octonion o;
  for (auto& v : o) v = d(rng);
  return o;
}

Octonion sub(const Octonion& a, const Octonion& b) {
  Octonion r;
  for (int i = 0; i < 8; ++i) r[i] = a[i] - b[i];
  return r;
}

double max_abs(const Octonion& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

TEST(Octonion, UnitTable) {
  for (int i = 1; i <= 7; ++i) {
    EXPECT_EQ(octonion_mul(i, i).sign, -1);
    EXPECT_EQ(octonion_mul(i, i).k, 0);
    for (int j = 1; j <= 7; ++j) {
      if (i == j) continue;
      const UnitProduct ij = octonion_mul(i, j);
      const UnitProduct ji = octonion_mul(j, i);
      EXPECT_EQ(ij.k, ji.k);
      EXPECT_EQ(ij.sign, -ji.sign);
      // quaternionic triples are cyclic: e_i e_j = s e_k implies e_j e_k = s e_i
      const UnitProduct jk = octonion_mul(j, ij.k);
      EXPECT_EQ(jk.k, i);
      EXPECT_EQ(jk.sign, ij.sign);
    }
  }
  EXPECT_THROW(octonion_mul(0, 1), Error);
  EXPECT_THROW(octonion_mul(1, 8), Error);
}

TEST(Octonion, SevenLinesOfThree) {
  int lines = 0;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      if (octonion_mul(i, j).k > j) ++lines;
  EXPECT_EQ(lines, 7);
}

TEST(Octonion, AlternativeButNotAssociative) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const Octonion x = random_octonion(rng), y = random_octonion(rng);
    const Octonion left = sub(octonion_product(octonion_product(x, x), y), octonion_product(x, octonion_product(x, y)));
    const Octonion right = sub(octonion_product(octonion_product(y, x), x), octonion_product(y, octonion_product(x, x)));
    EXPECT_LT(max_abs(left), 1e-11);
    EXPECT_LT(max_abs(right), 1e-11);
    // conj(xy) = conj(y) conj(x)
    EXPECT_LT(max_abs(sub(conjugate(octonion_product(x, y)), octonion_product(conjugate(y), conjugate(x)))), 1e-12);
    EXPECT_NEAR(norm_squared(octonion_product(x, y)), norm_squared(x) * norm_squared(y),
                1e-11 * norm_squared(x) * norm_squared(y));
  }
  // (e1 e2) e4 != e1 (e2 e4) for some units
  bool non_assoc = false;
  for (int i = 1; i <= 7 && !non_assoc; ++i)
    for (int j = 1; j <= 7 && !non_assoc; ++j)
      for (int k = 1; k <= 7 && !non_assoc; ++k) {
        const Octonion a = octonion_product(octonion_product(unit(i), unit(j)), unit(k));
        const Octonion b = octonion_product(unit(i), octonion_product(unit(j), unit(k)));
        non_assoc = max_abs(sub(a, b)) > 0.5;
      }
  EXPECT_TRUE(non_assoc);
}

TEST(Jordan, DimensionsAndSymmetry) {
  struct Dim {
    Field f;
    int k;
    int n;
  };
  for (const Dim& d : {Dim{Field::kReal, 3, 5}, Dim{Field::kComplex, 3, 8}, Dim{Field::kQuaternion, 3, 14},
                       Dim{Field::kOctonion, 3, 26}, Dim{Field::kReal, 4, 9}, Dim{Field::kComplex, 4, 15}}) {
    const PointTensors t = jordan_tensor(d.f, d.k);
    EXPECT_EQ(t.n(), d.n) << t.name;
    EXPECT_EQ(t.epsilon, -1);
    EXPECT_TRUE(t.h.dense().isApprox(Mat::Identity(d.n, d.n)));
    double residual = 1.0;
    lower_index(t.K, t.h, &residual);
    EXPECT_LT(residual, 1e-12) << t.name;
    // apolar: tr K_X = 0
    for (int x = 0; x < d.n; ++x) {
      double tr = 0.0;
      for (int i = 0; i < d.n; ++i) tr += t.K(i, x, i);
      EXPECT_NEAR(tr, 0.0, 1e-12);
    }
  }
}

TEST(Jordan, Rejections) {
  EXPECT_THROW(jordan_tensor(Field::kReal, 2), Error);
  EXPECT_THROW(jordan_tensor(Field::kOctonion, 4), Error);
}

TEST(Jordan, FieldNames) {
  EXPECT_EQ(field_dim(Field::kQuaternion), 4);
  EXPECT_EQ(field_dim(Field::kOctonion), 8);
  EXPECT_STREQ(field_name(Field::kComplex), "C");
}

}  // namespace
}  // namespace caffine
