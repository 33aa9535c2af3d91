// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Calabi products psi(u,p,q) = (e^u psi1(p), e^{-lambda u} psi2(q)), their
// predicted metric blocks, and pointwise detection/extraction of the product
// structure from (h, K).

#ifndef CAFFINE_CALABI_HPP_
#define CAFFINE_CALABI_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caffine/geometry.hpp"
#include "caffine/linalg.hpp"

namespace caffine {

struct CalabiSpec {
  double lambda = 1.0;
  ImmersionChart left;
  std::optional<ImmersionChart> right;  // empty: product with a point
  std::vector<double> point{1.0};       // used when right is empty
  std::pair<double, double> u_interval{-0.5, 0.5};

  bool with_point() const { return !right.has_value(); }
};

// Variables: u first, then the left coordinates, then the right ones.
// Throws kInvalidLambda for lambda in {0, -1}.
ImmersionChart compose(const CalabiSpec& spec);

// {"lambda", "left": path | chart, "right": path | chart | {"point": [...]}, "u_interval"}.
// Relative paths resolve against base_dir.
CalabiSpec calabi_spec_from_json(const std::string& text, const std::string& base_dir = ".");

struct FactorSignature {
  int n = 0;  // factor dimension
  int N = 0;  // negative index of its metric
};

struct MetricPrediction {
  double u_block = 0.0;      // lambda
  double left_block = 0.0;   // lambda / (1 + lambda)
  double right_block = 0.0;  // 1 / (1 + lambda); 0 for the point case
  int signature = 0;         // N(h)
};

// N is the negative index of the position coefficient (the eps = -1 metric).
MetricPrediction predicted_metric_signature(double lambda, const FactorSignature& left,
                                            const std::optional<FactorSignature>& right);

struct CalabiStructure {
  Vec T;  // coordinates, |h(T,T)| = 1
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;  // lambda1 - lambda2 in the point case
  int d2_dim = 0;
  int d3_dim = 0;
  bool point_factor = false;
  // lambda2 lambda3 = eps (two factors) or lambda1 lambda2 - lambda2^2 = eps
  bool exact_form = false;
  Mat d2;  // columns span D2 (coordinates)
  Mat d3;
  double residual = 0.0;  // eigen-equation and K(V,W) residual
  std::string source;     // candidate family that produced T
};

struct DetectOptions {
  double tol = 1e-6;
  // When set, T is oriented so that T . reference > 0 in coordinates.
  std::optional<Vec> reference;
  int newton_starts = 64;
};

// Returns the first qualifying direction, preferring ones in exact form.
std::optional<CalabiStructure> detect_calabi_direction(const SymMatrix& h, const MixedTensor12& K,
                                                       int eps, const DetectOptions& options = {});

struct CalabiSplit {
  Vec psi1;
  Vec psi2;
  double f = 0.0;
  double g = 0.0;
};

// psi1 = f (T - lambda3 x), psi2 = g (lambda2 x - T) with f = e^{-u}/(lambda2-lambda3),
// g = e^{-(lambda3/lambda2) u}/(lambda2-lambda3). u is the coordinate along T/lambda2;
// 0 fixes the integration constant at the queried point.
CalabiSplit decompose_pointwise(const ImmersionChart& chart, const std::vector<double>& point,
                                const CalabiStructure& structure, double u = 0.0);

}  // namespace caffine

#endif  // CAFFINE_CALABI_HPP_
