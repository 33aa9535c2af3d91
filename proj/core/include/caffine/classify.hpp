// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Pointwise classification from (h, K): typical basis, branch split of the
// K_{e1} spectrum, the isotropic map L on D2, the operators P_v, the greedy
// block decomposition of D2 and the final label.
//
// All vectors are coordinate vectors; "h-unit" and "h-orthonormal" refer to
// the metric passed in, which must be positive definite.

#ifndef CAFFINE_CLASSIFY_HPP_
#define CAFFINE_CLASSIFY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caffine/geometry.hpp"
#include "caffine/linalg.hpp"

namespace caffine {

enum class CaseTag { kQuadric, kC1, kCm, kCn, kB };
const char* case_tag_name(CaseTag tag);

struct CubicMaximum {
  Vec e1;                     // h-unit
  double lambda1 = 0.0;       // f(e1) = h(K_{e1} e1, e1)
  double stationarity = 0.0;  // |K_{e1} e1 - lambda1 e1|_h
  int converged_restarts = 0;
};

// Global maximum of f(u) = h(K_u u, u) on the h-unit sphere.
CubicMaximum maximize_cubic(const SymMatrix& h, const MixedTensor12& K, int restarts = 32,
                            std::uint64_t seed = 0);
// f(u) for an arbitrary (not necessarily unit) vector.
double cubic_value(const SymMatrix& h, const MixedTensor12& K, const Vec& u);

struct PointSpectrum {
  Vec e1;
  double lambda1 = 0.0;
  int eps = 1;
  double eta = 0.0;  // NaN when lambda1^2 - 4 eps < 0
  double mu = 0.0;   // NaN when lambda1^2 - 4 eps < 0
  std::vector<double> values;  // K_{e1} on the complement of e1, ascending
  Mat vectors;                 // matching h-orthonormal eigenvectors (columns)
  std::vector<int> half_branch;
  std::vector<int> mu_branch;
  CaseTag tag = CaseTag::kC1;
  int m = 1;  // 1 + |half branch|
  double branch_residual = 0.0;  // max |(l1 - 2 li)(eps - l1 li + li^2)|
};

// tol is relative to max(1, lambda1); delta_b bounds |lambda1^2 - 4 eps| for case B.
PointSpectrum spectrum_split(const SymMatrix& h, const MixedTensor12& K, const Vec& e1, int eps,
                             double tol = 1e-6, double delta_b = 1e-6);

// L restricted to an h-orthonormal basis of D2, values in the ambient space.
struct IsotropicMap {
  SymMatrix h;               // ambient metric
  Mat d2;                    // ambient coordinates of the D2 basis (columns)
  std::vector<Vec> values;   // L(b_i, b_j) at i * dim + j
  double lambda1 = 0.0;
  double eta = 0.0;
  double mu = 0.0;
  double sigma = 0.0;  // lambda1 eta / 2
  double tau = 0.0;    // eta (eta + lambda1 / 2) / 4
  int eps = 1;
  Vec e1;                            // empty for synthetic maps
  std::optional<MixedTensor12> K;    // present when built from a difference tensor

  int dim() const { return static_cast<int>(d2.cols()); }
  // a, b are coefficient vectors in the D2 basis.
  Vec apply(const Vec& a, const Vec& b) const;
  double inner(const Vec& x, const Vec& y) const { return h.bilinear(x, y); }
};

void fill_constants(IsotropicMap& map);  // sigma, tau from lambda1, eta

// Throws kIsotropyViolation when L leaves D3 or is not isotropic.
IsotropicMap build_L(const SymMatrix& h, const MixedTensor12& K, const PointSpectrum& spectrum,
                     double tol = 1e-7);

struct LIdentityResiduals {
  double d3_projection = 0.0;  // component of L along e1 and D2
  double isotropy = 0.0;       // h(L(v,v),L(v,v)) = sigma h(v,v)^2
  double linearized = 0.0;     // four-point polarization
  // Orthonormal v1..v4 in D2, L_ij = L(v_i, v_j):
  double frame2_cross = 0.0;  // h(L11, L12) = 0
  double frame2_sum = 0.0;    // h(L11, L22) + 2 h(L12, L12) = sigma
  double frame3 = 0.0;        // h(L11, L23) + 2 h(L12, L13) = 0
  double frame4 = 0.0;        // h(L12, L34) + h(L13, L24) + h(L14, L23) = 0
};
// Random orthonormal 4-frames and 4-tuples in D2 (seeded).
LIdentityResiduals check_L_identities(const IsotropicMap& L, int samples = 20, std::uint64_t seed = 0);

struct POperator {
  Mat p;                          // in the D2 basis
  double symmetry_residual = 0.0; // |P - P^T| and agreement with K_v L(v, .)
  double sigma_residual = 0.0;    // |P v - sigma v|
  std::vector<double> spectrum;   // eigenvalues on the complement of v, ascending
  Mat complement_vectors;         // matching eigenvectors (D2 coefficients)
  double containment = 0.0;       // max distance of spectrum to {0, tau}
};
// v is a unit coefficient vector in the D2 basis. Throws kSpectrumViolation.
POperator p_operator(const IsotropicMap& L, const Vec& v, double tol = 1e-6);

struct D2Block {
  Vec v;           // D2 coefficients
  Mat zero_space;  // V_v(0), D2 coefficients (columns)
};

struct DTwoDecomposition {
  int k0 = 0;
  int p = 0;
  std::vector<D2Block> blocks;
  double sigma = 0.0;
  double tau = 0.0;
  bool sigma_equals_tau = false;  // |sigma - tau| < 1e-6
  Vec trace;          // Tr L, ambient coordinates
  double trace_norm = 0.0;
  double rho = 0.0;   // |Tr L| / (1 + p)
  int image_dim = 0;  // dim Im L
  double max_containment = 0.0;
  double max_symmetry = 0.0;
};

// Greedy construction D2 = sum_l {v_l} + V_{v_l}(0). Throws kForbiddenP,
// kBlockMismatch or kSpectrumViolation.
DTwoDecomposition decompose_D2(const IsotropicMap& L, double tol = 1e-6);

struct RhoCheck {
  double rho_direct = 0.0;
  double rho_formula = 0.0;  // sqrt(k0 eta (lambda1 + (k0 - 1) mu) / 2)
  bool agree = false;
};
RhoCheck trace_rho_check(const DTwoDecomposition& dec, double lambda1, double eta, double mu);

// n for which Tr L vanishes, given p and k0 (m = 1 + (1 + p) k0).
int critical_dimension(int p, int k0);

enum class Label {
  kQuadric,
  kCaseB,
  kCalabiPointFactor,
  kCalabiTwoFactor,
  kSL_R,
  kSL_C,
  kSU_star,
  kE6_F4,
  kUnrecognized,
};

struct ClassifyConfig {
  int restarts = 32;
  std::uint64_t seed = 0;
  double branch_tol = 1e-6;
  double delta_b = 1e-6;
  double trace_tol = 1e-6;
  double zero_cubic = 1e-10;
  bool check_parallel = true;
  double parallel_tol = 1e-6;
};

struct ClassificationReport {
  Label label = Label::kUnrecognized;
  int label_arg = 0;       // the m in SL_R(m) and friends
  std::string label_text;  // e.g. "SL_R(3)"
  int n = 0;
  int epsilon = 1;
  CaseTag tag = CaseTag::kQuadric;
  int m = 0;
  double lambda1 = 0.0;
  double mu = 0.0;
  double eta = 0.0;
  std::optional<int> k0;
  std::optional<int> p;
  double trace_L_norm = 0.0;
  double rho = 0.0;
  std::map<std::string, double> residuals;
  std::map<std::string, double> evidence;
  std::string diagnostic;
  std::optional<PointSpectrum> spectrum;
  std::optional<IsotropicMap> isotropic;
  std::optional<DTwoDecomposition> decomposition;
};

std::string label_text(Label label, int arg);

ClassificationReport classify_tensors(const SymMatrix& h, const MixedTensor12& K, int eps,
                                      const ClassifyConfig& config = {});
ClassificationReport classify_point(const ImmersionChart& chart, const std::vector<double>& point,
                                    const ClassifyConfig& config = {});

}  // namespace caffine

#endif  // CAFFINE_CLASSIFY_HPP_
