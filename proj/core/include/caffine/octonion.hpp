// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// The octonion multiplication table used for the 7-dimensional blocks of the
// D2 decomposition, plus real-coefficient arithmetic built on it.

#ifndef CAFFINE_OCTONION_HPP_
#define CAFFINE_OCTONION_HPP_

#include <array>

namespace caffine {

struct UnitProduct {
  int sign;  // +1 or -1
  int k;     // 0 encodes the identity, so (-1, 0) is -id
};

// e_i e_j for 1 <= i, j <= 7. Throws kInvalidInput outside that range.
UnitProduct octonion_mul(int i, int j);

// Coefficients on (1, e1, ..., e7).
using Octonion = std::array<double, 8>;

Octonion octonion_product(const Octonion& a, const Octonion& b);
Octonion conjugate(const Octonion& a);
double norm_squared(const Octonion& a);

}  // namespace caffine

#endif  // CAFFINE_OCTONION_HPP_
