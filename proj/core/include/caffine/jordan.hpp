// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Synthetic point tensors with known classification: cubic forms of the
// traceless Jordan algebras Herm(k, F), abstract isotropic maps with a chosen
// block structure, and the two-eigenvalue model tensors.

#ifndef CAFFINE_JORDAN_HPP_
#define CAFFINE_JORDAN_HPP_

#include <string>

#include "caffine/classify.hpp"
#include "caffine/linalg.hpp"

namespace caffine {

enum class Field { kReal, kComplex, kQuaternion, kOctonion };

int field_dim(Field f);
const char* field_name(Field f);

struct PointTensors {
  std::string name;
  SymMatrix h;
  MixedTensor12 K;
  int epsilon = -1;
  int n() const { return h.dim(); }
};

// Traceless Herm(k, F) with h = Re tr(A o B) and C(A, B, D) = sqrt(k) Re tr((A o B) o D),
// eps = -1. Scaled so that the Gauss equation holds. Octonions only for k = 3.
PointTensors jordan_tensor(Field field, int k);

// Isotropic map on D2 = k0 blocks of dimension 1 + p. p = 2 uses the imaginary
// quaternions, which gives a consistent L that no hypersurface realises.
IsotropicMap synthetic_isotropic_map(double lambda1, int eps, int k0, int p);

// K_e1 e1 = lambda e1, K_e1 ei = lambda/2 ei, K_ei ej = lambda/2 delta_ij e1, h = I.
PointTensors half_branch_tensor(int n, double lambda1, int eps);
// lambda = 2, eps = 1: the degenerate case B.
PointTensors case_b_tensor(int n);
// lambda = 1, eps = -1: all of e1-perp on the lambda/2 branch with mu distinct.
PointTensors cn_tensor(int n);

}  // namespace caffine

#endif  // CAFFINE_JORDAN_HPP_
