// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/octonion.hpp"

#include <string>

#include "caffine/error.hpp"

namespace caffine {

namespace {

// Row i, column j holds the signed index of e_i e_j; 0 on the diagonal is -id.
constexpr int kTable[7][7] = {
    {0, 3, -2, 5, -4, -7, 6},   // e1
    {-3, 0, 1, 6, 7, -4, -5},   // e2
    {2, -1, 0, 7, -6, 5, -4},   // e3
    {-5, -6, -7, 0, 1, 2, 3},   // e4
    {4, -7, 6, -1, 0, -3, 2},   // e5
    {7, 4, -5, -2, 3, 0, -1},   // e6
    {-6, 5, 4, -3, -2, 1, 0},   // e7
};

}  // namespace

UnitProduct octonion_mul(int i, int j) {
  if (i < 1 || i > 7 || j < 1 || j > 7)
    throw Error(ErrorCode::kInvalidInput,
                "octonion units are e1..e7, got (" + std::to_string(i) + "," + std::to_string(j) + ")");
  const int t = kTable[i - 1][j - 1];
  if (t == 0) return {-1, 0};
  return {t > 0 ? 1 : -1, t > 0 ? t : -t};
}

Octonion octonion_product(const Octonion& a, const Octonion& b) {
  Octonion r{};
  for (int i = 0; i < 8; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < 8; ++j) {
      if (b[j] == 0.0) continue;
      const double c = a[i] * b[j];
      if (i == 0) {
        r[j] += c;
      } else if (j == 0) {
        r[i] += c;
      } else {
        const UnitProduct u = octonion_mul(i, j);
        r[u.k] += u.sign * c;
      }
    }
  }
  return r;
}

Octonion conjugate(const Octonion& a) {
  Octonion r = a;
  for (int i = 1; i < 8; ++i) r[i] = -r[i];
  return r;
}

double norm_squared(const Octonion& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

}  // namespace caffine
