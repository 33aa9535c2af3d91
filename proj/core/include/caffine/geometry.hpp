// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Centroaffine invariants of a hypersurface chart x: U in R^n -> R^{n+1}.
//
// At a point the second derivatives are split along the tangent frame and the
// position vector:  x_ij = Gamma^k_ij x_k - eps h_ij x.  Everything downstream
// (Levi-Civita connection, difference tensor, cubic form, curvature, the
// covariant derivative of the cubic form) comes from one order-4 jet of each
// component, so no finite differences are involved.

#ifndef CAFFINE_GEOMETRY_HPP_
#define CAFFINE_GEOMETRY_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caffine/expr.hpp"
#include "caffine/linalg.hpp"

namespace caffine {

struct ImmersionChart {
  std::string name;
  int n = 0;
  std::vector<Expr> components;  // n + 1 entries
  std::vector<std::pair<double, double>> domain;
  std::map<std::string, double> params;

  std::vector<double> center() const;
  bool contains(const std::vector<double>& point) const;
};

// Parses component texts with the given parameters.
ImmersionChart make_chart(std::string name, int n, const std::vector<std::string>& components,
                          std::vector<std::pair<double, double>> domain,
                          std::map<std::string, double> params = {});

// Chart interchange format:
// {"name","n","components":[...],"domain":[[lo,hi],...],"params":{...}}
ImmersionChart chart_from_json(const std::string& text);
std::string chart_to_json(const ImmersionChart& chart);
// %.17g
std::string format_double17(double v);

struct FrameResult {
  int epsilon = 1;
  SymMatrix h;
  MixedTensor12 gamma;  // induced connection Gamma^k_ij
  // N(h): negative index of the metric taken with eps = -1 (the position
  // coefficient itself). Locally strongly convex iff N(h) is 0 or n.
  int signature = 0;
  bool convex = true;  // false when neither sign of eps makes h definite
};

struct CentroaffinePointData {
  int n = 0;
  std::vector<double> point;
  int epsilon = 1;
  int signature = 0;
  bool convex = true;

  SymMatrix h;
  MixedTensor12 gamma;
  MixedTensor12 gamma_lc;
  MixedTensor12 K;
  Sym3Tensor C;
  double c_cross_check = 0.0;  // |C via nabla h - C via -2h(K.,.)|, h-norm
  double metric_compat = 0.0;  // |nabla-hat h|, h-norm
  Vec tcheb_form;              // T-hat_i = (1/n) tr K_{d_i}
  Vec tcheb_vector;            // T^i = h^{ij} T-hat_j
  Sym3Tensor traceless;
  std::vector<double> curvature;  // R^l_{kij} = R(d_i, d_j) d_k, flat [l][k][i][j]
  std::vector<double> nabla_c;    // (nabla-hat_{d_m} C)(d_i, d_j, d_k), flat [m][i][j][k]
  MetricFrame frame;              // h-orthonormal (up to sign) frame

  Vec position;  // x(point)
  Mat tangent;   // (n+1) x n, columns x_i
};

FrameResult centroaffine_frame(const ImmersionChart& chart, const std::vector<double>& point);
MixedTensor12 levi_civita(const ImmersionChart& chart, const std::vector<double>& point,
                          double* metric_compat_residual = nullptr);
CentroaffinePointData invariants_at(const ImmersionChart& chart, const std::vector<double>& point);

// Norm of a tensor with `up` contravariant slots followed by `down` covariant
// slots (flat layout), measured in the metric frame.
double h_norm(const std::vector<double>& t, int up, int down, const MetricFrame& f);
double h_norm(const Sym3Tensor& t, const MetricFrame& f);
double h_norm(const MixedTensor12& t, const MetricFrame& f);

struct IntegrabilityReport {
  double gauss = 0.0;       // curvature vs eps(h^h) - [K,K]
  double codazzi = 0.0;     // slot (1,2) asymmetry of nabla-hat C
  double derivation = 0.0;  // R acting as a derivation on K
  double nabla_c = 0.0;     // |nabla-hat C|
  double c_norm = 0.0;      // |C|
  double parallel_residual = 0.0;  // |nabla-hat C| / |C| (or absolute when C ~ 0)
  bool parallel = false;           // parallel_residual <= 1e-8
};
IntegrabilityReport check_integrability(const CentroaffinePointData& data);

// |nabla-hat C|_h normalised by |C|_h when |C|_h > 1e-10.
double parallel_residual(const CentroaffinePointData& data);

struct GridSpec {
  int per_axis = 5;
  double margin = 0.05;
};

// Grid points in lexicographic order (first coordinate slowest).
std::vector<std::vector<double>> grid_points(const ImmersionChart& chart, const GridSpec& grid);

struct PointFailure {
  std::vector<double> point;
  std::string message;
};

struct VerifyReport {
  double max_residual = 0.0;
  std::vector<double> worst_point;
  bool pass = false;
  int points = 0;
  double tol = 1e-8;
  std::vector<PointFailure> failures;
};

// jobs <= 0 means hardware concurrency. Output does not depend on jobs.
VerifyReport verify_parallel(const ImmersionChart& chart, const GridSpec& grid, double tol = 1e-8,
                             int jobs = 1);
VerifyReport verify_parallel_points(const ImmersionChart& chart,
                                    const std::vector<std::vector<double>>& points,
                                    double tol = 1e-8, int jobs = 1);

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace caffine

#endif  // CAFFINE_GEOMETRY_HPP_
