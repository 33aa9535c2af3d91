// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
// Seeded property suites. Finite differences serve as the independent oracle
// for jets and for the frame quantities h, Gamma and C.
#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/SVD>

#include "caffine/calabi.hpp"
#include "caffine/catalog.hpp"
#include "caffine/classify.hpp"
#include "caffine/expr.hpp"
#include "caffine/jordan.hpp"
#include "test_support.hpp"

namespace caffine {
namespace {

// Smooth random expression in u1..un, bounded away from singularities on [-1, 1]^n.
std::string random_smooth_expr(int n, std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> var(1, n);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  auto leaf = [&] {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f*u%d", coef(rng), var(rng));
    return std::string(buf);
  };
  if (depth == 0) return leaf();
  const std::string a = random_smooth_expr(n, rng, depth - 1), b = random_smooth_expr(n, rng, depth - 1);
  switch (rng() % 7) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + ")*(" + b + ")";
    case 2: return "exp(0.5*(" + a + "))";
    case 3: return "sin(" + a + ")";
    case 4: return "atan(" + a + ")";
    case 5: return "sqrt(2 + (" + a + ")^2)";
    default: return "(" + a + ")/(3 + cos(" + b + "))";
  }
}

// One central difference of g along coordinate i.
double central(const std::function<double(const std::vector<double>&)>& g, std::vector<double> p, int i,
               double step) {
  p[i] += step;
  const double plus = g(p);
  p[i] -= 2 * step;
  return (plus - g(p)) / (2 * step);
}

// |alpha| <= 2 straight from evaluations; |alpha| = 3 by differencing the
// jet's (already checked) second derivatives once more.
TEST(JetProperty, MatchesFiniteDifferences) {
  std::mt19937_64 rng(100);
  const double step = 1e-4;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const Expr e = parse(random_smooth_expr(n, rng, 3), n);
    std::vector<double> p(n);
    for (auto& x : p) x = std::uniform_real_distribution<double>(-0.8, 0.8)(rng);
    const Jet j = eval_jet(e, p, 3);
    auto f = [&](const std::vector<double>& q) { return eval(e, q); };
    for (int i = 0; i < n; ++i) {
      std::vector<int> a(n, 0);
      a[i] = 1;
      EXPECT_NEAR(partial(j, a), central(f, p, i, step), 1e-6) << e.to_string();
      for (int k = i; k < n; ++k) {
        std::vector<int> b = a;
        b[k] += 1;
        auto fi = [&](const std::vector<double>& q) { return central(f, q, i, step); };
        EXPECT_NEAR(partial(j, b), central(fi, p, k, step), 1e-6) << e.to_string();
        for (int m = k; m < n; ++m) {
          std::vector<int> c = b;
          c[m] += 1;
          auto second = [&](const std::vector<double>& q) { return partial(eval_jet(e, q, 2), b); };
          EXPECT_NEAR(partial(j, c), central(second, p, m, step), 1e-6) << e.to_string();
        }
      }
    }
  }
}

TEST(JetProperty, ChainRuleForPolynomials) {
  // f(g) with f(t) = t^3 - 2t, g polynomial: text substitution vs jet composition
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
    const double b = std::uniform_real_distribution<double>(-2, 2)(rng);
    const std::string g = "(" + format_double17(a) + "*u1^2 + " + format_double17(b) + "*u1*u2 + u2)";
    const Expr composed = parse(g + "^3 - 2*" + g, 2);
    const std::vector<double> p{0.3, -0.4};
    const Jet gj = eval_jet(parse(g, 2), p, 4);
    const Jet via = gj * gj * gj - 2.0 * gj;
    const Jet direct = eval_jet(composed, p, 4);
    for (int i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct[i], via[i], 1e-12 * (1 + std::abs(via[i])));
  }
}

TEST(LinalgProperty, ClusterIsOrderPreservingAndIdempotent) {
  std::mt19937_64 rng(102);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) {
      const double base = static_cast<double>(rng() % 5);
      v.push_back(base + (rng() % 2 ? 1e-9 : 0.0));
    }
    std::sort(v.begin(), v.end());
    const auto g = cluster_eigenvalues(v);
    int next = 0;
    for (const auto& grp : g)
      for (int idx : grp) EXPECT_EQ(idx, next++);
    EXPECT_EQ(next, 10);
    std::vector<double> snapped(v.size());
    for (const auto& grp : g)
      for (int idx : grp) snapped[idx] = v[grp.front()];
    EXPECT_EQ(cluster_eigenvalues(snapped), g);
  }
}

// ---------------------------------------------------------------- geometry

// Position coefficient c and connection Gamma from finite differences.
struct FdFrame {
  Mat c;
  std::vector<Mat> gamma;  // gamma[k](i, j)
};

Vec ambient(const ImmersionChart& ch, const std::vector<double>& p) {
  Vec x(ch.n + 1);
  for (int a = 0; a <= ch.n; ++a) x(a) = eval(ch.components[a], p);
  return x;
}

// Fourth order second directional derivative of the immersion along dir.
Vec second_directional(const ImmersionChart& ch, const std::vector<double>& p, const Vec& dir, double s) {
  auto at = [&](double t) {
    std::vector<double> q = p;
    for (int i = 0; i < ch.n; ++i) q[i] += t * dir(i);
    return ambient(ch, q);
  };
  return (-at(2 * s) + 16 * at(s) - 30 * at(0) + 16 * at(-s) - at(-2 * s)) / (12 * s * s);
}

FdFrame fd_frame(const ImmersionChart& ch, const std::vector<double>& p) {
  const int n = ch.n;
  const double s1 = 1e-3, s2 = 5e-3;
  Mat basis(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    auto at = [&](double t) {
      std::vector<double> q = p;
      q[i] += t;
      return ambient(ch, q);
    };
    basis.col(i) = (-at(2 * s1) + 8 * at(s1) - 8 * at(-s1) + at(-2 * s1)) / (12 * s1);
  }
  basis.col(n) = ambient(ch, p);
  const Mat inv = basis.inverse();
  FdFrame f;
  f.c = Mat::Zero(n, n);
  f.gamma.assign(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec xij;
      if (i == j) {
        xij = second_directional(ch, p, Vec::Unit(n, i), s2);
      } else {
        const Vec plus = Vec::Unit(n, i) + Vec::Unit(n, j), minus = Vec::Unit(n, i) - Vec::Unit(n, j);
        xij = (second_directional(ch, p, plus, s2) - second_directional(ch, p, minus, s2)) / 4.0;
      }
      const Vec coef = inv * xij;
      f.c(i, j) = f.c(j, i) = coef(n);
      for (int k = 0; k < n; ++k) f.gamma[k](i, j) = f.gamma[k](j, i) = coef(k);
    }
  return f;
}

std::vector<ImmersionChart> property_charts() {
  return {make_quadric(2, 1),
          make_power({1, 2, 0.5}),
          make_complex_power(2, {-1, 1, 0.3}),
          make_case_b(2),
          make_surface6('a', 3.0, surface6_mu(3.0, 1), 2.0),
          make_chart("generic", 2, {"u1", "u2", "exp(u1) + u2^3 + u1*u2 + 2"}, {{-0.5, 0.5}, {-0.5, 0.5}}),
          make_chart("generic3", 3, {"u1", "u2", "u3", "1 + u1^2 + u2^2/2 + u3^2/3 + u1*u2*u3"},
                     {{-0.4, 0.4}, {-0.4, 0.4}, {-0.4, 0.4}})};
}

TEST(GeometryProperty, FrameMatchesFiniteDifferences) {
  std::mt19937_64 rng(103);
  for (const ImmersionChart& ch : property_charts()) {
    const int n = ch.n;
    for (int t = 0; t < 3; ++t) {
      const auto p = testing::random_point(ch, rng, 0.2);
      const auto d = invariants_at(ch, p);
      const FdFrame f = fd_frame(ch, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          EXPECT_NEAR(d.h(i, j), -d.epsilon * f.c(i, j), 1e-5) << ch.name;
          for (int k = 0; k < n; ++k) EXPECT_NEAR(d.gamma(k, i, j), f.gamma[k](i, j), 1e-5) << ch.name;
        }
      // C = nabla h, with d_i h from a fourth order stencil of FD frames
      const double s = 5e-3;
      std::vector<Mat> dh(n);
      for (int i = 0; i < n; ++i) {
        auto hat = [&](double tt) {
          std::vector<double> q = p;
          q[i] += tt;
          return Mat(-d.epsilon * fd_frame(ch, q).c);
        };
        dh[i] = (-hat(2 * s) + 8 * hat(s) - 8 * hat(-s) + hat(-2 * s)) / (12 * s);
      }
      const Mat h = -d.epsilon * f.c;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double c = dh[i](j, k);
            for (int l = 0; l < n; ++l) c -= f.gamma[l](i, j) * h(l, k) + f.gamma[l](i, k) * h(j, l);
            EXPECT_NEAR(d.C(i, j, k), c, 1e-5) << ch.name << " " << i << j << k;
          }
    }
  }
}

TEST(GeometryProperty, IdentitiesOnEveryChart) {
  std::mt19937_64 rng(104);
  for (const ImmersionChart& ch : property_charts()) {
    for (int t = 0; t < 5; ++t) {
      const auto d = invariants_at(ch, testing::random_point(ch, rng));
      const auto r = check_integrability(d);
      EXPECT_LT(r.gauss, 1e-8) << ch.name;
      EXPECT_LT(r.codazzi, 1e-8) << ch.name;
      double asym = 1.0;
      lower_index(d.K, d.h, &asym);
      EXPECT_LT(asym, 1e-10) << ch.name;
      for (int s = 0; s < 20; ++s) {
        const Vec x = testing::random_vec(ch.n, rng);
        EXPECT_NEAR(d.h.bilinear(d.tcheb_vector, x), d.tcheb_form.dot(x), 1e-10 * (1 + x.norm()));
      }
      EXPECT_EQ(d.h.negative_index() + d.h.negated().negative_index(), ch.n);
    }
  }
}

// ---------------------------------------------------------------- calabi

struct FactorChart {
  ImmersionChart chart;
  std::vector<double> at;
};

TEST(CalabiProperty, ComposeThenMeasure) {
  const std::vector<ImmersionChart> factors{testing::circle(), testing::hyperbola(), make_quadric(2, 1),
                                            make_quadric(2, -1)};
  for (double lambda : {2.0, 0.5, -0.5, -3.0}) {
    for (size_t a = 0; a < factors.size(); ++a) {
      for (size_t b = 0; b < factors.size(); b += 2) {
        CalabiSpec spec;
        spec.lambda = lambda;
        spec.left = factors[a];
        spec.right = factors[b];
        const ImmersionChart ch = compose(spec);
        const int n1 = factors[a].n, n2 = factors[b].n;
        const auto pts = grid_points(ch, GridSpec{2, 0.1});
        for (size_t t = 0; t < std::min<size_t>(pts.size(), 20); ++t) {
          const auto& p = pts[t];
          const auto d = invariants_at(ch, p);
          const std::vector<double> p1(p.begin() + 1, p.begin() + 1 + n1), p2(p.begin() + 1 + n1, p.end());
          const auto d1 = invariants_at(factors[a], p1), d2 = invariants_at(factors[b], p2);
          const Mat c = -d.epsilon * d.h.dense();
          const Mat c1 = -d1.epsilon * d1.h.dense(), c2 = -d2.epsilon * d2.h.dense();
          Mat want = Mat::Zero(ch.n, ch.n);
          want(0, 0) = lambda;
          want.block(1, 1, n1, n1) = lambda / (1 + lambda) * c1;
          want.block(1 + n1, 1 + n1, n2, n2) = 1.0 / (1 + lambda) * c2;
          EXPECT_LT((c - want).norm(), 1e-8) << ch.name;
        }
      }
    }
  }
}

TEST(CalabiProperty, ParallelismAndEigenConstraints) {
  for (double lambda : {1.0, 3.0, -0.25, -4.0}) {
    for (bool point : {false, true}) {
      CalabiSpec spec;
      spec.lambda = lambda;
      spec.left = make_quadric(2, -1);
      if (!point) spec.right = testing::hyperbola();
      const ImmersionChart ch = compose(spec);
      EXPECT_TRUE(verify_parallel(ch, GridSpec{3, 0.05}, 1e-7, 2).pass) << ch.name;
      const auto d = invariants_at(ch, ch.center());
      DetectOptions o;
      o.reference = Vec::Unit(ch.n, 0);
      const auto s = detect_calabi_direction(d.h, d.K, d.epsilon, o);
      ASSERT_TRUE(s.has_value()) << ch.name;
      const double sgn = lambda > 0 ? 1.0 : -1.0;
      if (point) {
        EXPECT_NEAR(s->lambda1 * s->lambda2 - s->lambda2 * s->lambda2 + sgn, 0.0, 1e-8) << ch.name;
      } else {
        EXPECT_NEAR(s->lambda1, s->lambda2 + s->lambda3, 1e-9) << ch.name;
        EXPECT_NEAR(s->lambda2 * s->lambda3 + sgn, 0.0, 1e-8) << ch.name;
      }
    }
  }
}

TEST(CalabiProperty, RecoveredSubspacesAreSeparated) {
  CalabiSpec spec;
  spec.lambda = -0.5;
  spec.left = make_quadric(2, 1);
  spec.right = testing::circle();
  const ImmersionChart ch = compose(spec);
  std::vector<Vec> psi1, psi2;
  std::mt19937_64 rng(105);
  DetectOptions o;
  o.reference = Vec::Unit(ch.n, 0);
  for (int t = 0; t < 15; ++t) {
    const auto p = testing::random_point(ch, rng);
    const auto d = invariants_at(ch, p);
    const auto s = detect_calabi_direction(d.h, d.K, d.epsilon, o);
    ASSERT_TRUE(s.has_value());
    const auto split = decompose_pointwise(ch, p, *s, p[0]);
    psi1.push_back(split.psi1);
    psi2.push_back(split.psi2);
  }
  auto span = [](const std::vector<Vec>& cols, int r, double* resid) {
    Mat m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    *resid = svd.singularValues()(r) / svd.singularValues()(0);
    return Mat(svd.matrixU().leftCols(r));
  };
  double r1 = 0, r2 = 0;
  const Mat q1 = span(psi1, 3, &r1), q2 = span(psi2, 2, &r2);
  EXPECT_LT(r1, 1e-6);
  EXPECT_LT(r2, 1e-6);
  const double cos_max = Eigen::JacobiSVD<Mat>(q1.transpose() * q2).singularValues()(0);
  EXPECT_GT(std::acos(std::min(1.0, cos_max)), 0.1);
}

// ---------------------------------------------------------------- classify

// Pull (h, K) back along a random linear change of coordinates.
PointTensors transformed(const PointTensors& t, std::mt19937_64& rng) {
  const int n = t.n();
  Mat A(n, n);
  do {
    for (int i = 0; i < n; ++i) A.col(i) = testing::random_vec(n, rng);
  } while (std::abs(A.determinant()) < 0.1);
  const Mat Ainv = A.inverse();
  PointTensors out = t;
  out.h = SymMatrix::from_dense(A.transpose() * t.h.dense() * A);
  MixedTensor12 K(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Vec v = Ainv * t.K.apply(A.col(i), A.col(j));
      for (int k = 0; k < n; ++k) K.set(k, i, j, v(k));
    }
  out.K = K;
  return out;
}

TEST(ClassifyProperty, CoordinateInvariance) {
  std::mt19937_64 rng(106);
  for (const auto& base : {jordan_tensor(Field::kReal, 3), jordan_tensor(Field::kComplex, 3),
                           half_branch_tensor(4, 3.0, 1), case_b_tensor(3)}) {
    const auto r0 = classify_tensors(base.h, base.K, base.epsilon);
    for (int t = 0; t < 3; ++t) {
      const PointTensors tt = transformed(base, rng);
      const auto r = classify_tensors(tt.h, tt.K, tt.epsilon);
      EXPECT_EQ(r.label_text, r0.label_text) << base.name;
      EXPECT_NEAR(r.lambda1, r0.lambda1, 1e-7) << base.name;
      EXPECT_EQ(r.k0, r0.k0);
      EXPECT_EQ(r.p, r0.p);
    }
  }
}

TEST(ClassifyProperty, ArgmaxDominatesAndIsStationary) {
  std::mt19937_64 rng(107);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 4;
    const SymMatrix h = testing::random_spd(n, rng);
    const MixedTensor12 K = testing::random_difference_tensor(h, rng);
    const CubicMaximum m = maximize_cubic(h, K, 32, t);
    EXPECT_LT(m.stationarity, 1e-9);
    for (int s = 0; s < 1000; ++s) {
      Vec u = testing::random_vec(n, rng);
      u /= std::sqrt(h.bilinear(u, u));
      EXPECT_GE(m.lambda1, cubic_value(h, K, u) - 1e-9);
    }
  }
}

TEST(ClassifyProperty, BranchPolynomialAndGates) {
  std::vector<PointTensors> inputs;
  for (Field f : {Field::kReal, Field::kComplex, Field::kQuaternion})
    for (int k : {3, 4, 5}) inputs.push_back(jordan_tensor(f, k));
  inputs.push_back(jordan_tensor(Field::kOctonion, 3));
  for (const auto& t : inputs) {
    const auto r = classify_tensors(t.h, t.K, t.epsilon);
    ASSERT_TRUE(r.spectrum.has_value()) << t.name;
    const double l1 = r.lambda1;
    for (double li : r.spectrum->values) {
      EXPECT_LT(std::abs((l1 - 2 * li) * (r.epsilon - l1 * li + li * li)), 1e-7 * (1 + l1 * l1 * l1)) << t.name;
    }
    ASSERT_TRUE(r.p.has_value() && r.k0.has_value()) << t.name;
    EXPECT_TRUE(*r.p == 0 || *r.p == 1 || *r.p == 3 || *r.p == 7);
    // zero trace: the dimension is pinned exactly
    EXPECT_EQ(r.n, critical_dimension(*r.p, *r.k0)) << t.name;
    EXPECT_LT(r.residuals.at("L_linearized"), 1e-6) << t.name;
    EXPECT_LT(r.residuals.at("L_frame4"), 1e-6) << t.name;
    EXPECT_LT(r.residuals.at("P_containment"), 1e-6) << t.name;
  }
}

TEST(ClassifyProperty, SyntheticRhoAgreement) {
  for (int p : {0, 1, 3, 7})
    for (int k0 : {1, 2, 3})
      for (double l1 : {2.5, 4.0}) {
        const auto dec = decompose_D2(synthetic_isotropic_map(l1, 1, k0, p));
        const IsotropicMap L = synthetic_isotropic_map(l1, 1, k0, p);
        const auto rc = trace_rho_check(dec, L.lambda1, L.eta, L.mu);
        EXPECT_NEAR(rc.rho_direct * rc.rho_direct, rc.rho_formula * rc.rho_formula, 1e-8);
        EXPECT_EQ(dec.k0, k0);
        EXPECT_EQ(dec.p, p);
      }
}

}  // namespace
}  // namespace caffine
