// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "caffine/error.hpp"

namespace caffine {

const char* case_tag_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::kQuadric: return "Quadric";
    case CaseTag::kC1: return "C1";
    case CaseTag::kCm: return "Cm";
    case CaseTag::kCn: return "Cn";
    case CaseTag::kB: return "B";
  }
  return "?";
}

std::string label_text(Label label, int arg) {
  switch (label) {
    case Label::kQuadric: return "Quadric";
    case Label::kCaseB: return "CaseB";
    case Label::kCalabiPointFactor: return "CalabiPointFactor";
    case Label::kCalabiTwoFactor: return "CalabiTwoFactor";
    case Label::kSL_R: return "SL_R(" + std::to_string(arg) + ")";
    case Label::kSL_C: return "SL_C(" + std::to_string(arg) + ")";
    case Label::kSU_star: return "SU_star(" + std::to_string(arg) + ")";
    case Label::kE6_F4: return "E6_F4";
    case Label::kUnrecognized: return "Unrecognized";
  }
  return "Unrecognized";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// K in an h-orthonormal frame; there C_abc = k[c][a][b] is totally symmetric.
struct OrthoK {
  int n = 0;
  MetricFrame frame;
  std::vector<double> k;  // [c][a][b]
  double norm = 0.0;      // Frobenius norm of k

  double at(int c, int a, int b) const { return k[(static_cast<size_t>(c) * n + a) * n + b]; }
  Vec apply(const Vec& u, const Vec& w) const {
    Vec r = Vec::Zero(n);
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        if (u(a) == 0.0) continue;
        for (int b = 0; b < n; ++b) s += at(c, a, b) * u(a) * w(b);
      }
      r(c) = s;
    }
    return r;
  }
  // matrix of w -> K(u, w)
  Mat op(const Vec& u) const {
    Mat m = Mat::Zero(n, n);
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += at(c, a, b) * u(a);
        m(c, b) = s;
      }
    return m;
  }
  double f(const Vec& u) const { return u.dot(apply(u, u)); }
};

OrthoK to_ortho(const SymMatrix& h, const MixedTensor12& K) {
  OrthoK o;
  o.n = h.dim();
  if (K.dim() != o.n) throw Error(ErrorCode::kInvalidInput, "metric and difference tensor dimensions differ");
  o.frame = metric_frame(h);
  for (int s : o.frame.signs)
    if (s < 0) throw Error(ErrorCode::kInvalidInput, "classification needs a positive definite metric");
  const std::vector<double> raw = frame_mixed(K, o.frame);
  const int n = o.n;
  o.k.assign(raw.size(), 0.0);
  // symmetrize over all slots to drop rounding asymmetry
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        auto r = [&](int x, int y, int z) { return raw[(static_cast<size_t>(x) * n + y) * n + z]; };
        const double s = (r(c, a, b) + r(c, b, a) + r(a, b, c) + r(a, c, b) + r(b, a, c) + r(b, c, a)) / 6.0;
        o.k[(static_cast<size_t>(c) * n + a) * n + b] = s;
      }
  double s = 0.0;
  for (double v : o.k) s += v * v;
  o.norm = std::sqrt(s);
  return o;
}

// Columns: orthonormal basis of the Euclidean complement of unit u.
Mat complement_basis(const Vec& u) {
  const int n = static_cast<int>(u.size());
  Eigen::HouseholderQR<Mat> qr{Mat(u)};
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t i, int base) {
  double r = 0.0, f = 1.0 / base;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f /= base;
  }
  return r;
}

struct AscentResult {
  Vec u;
  double value;
  double grad;
};

AscentResult ascend(const OrthoK& o, Vec u) {
  const int n = o.n;
  const double scale = std::max(o.norm, 1e-300);
  const double grad_tol = 1e-12 * std::max(1.0, o.norm);
  u.normalize();
  auto gradient = [&](const Vec& x, double& fx) {
    const Vec kuu = o.apply(x, x);
    fx = x.dot(kuu);
    const Vec g = 3.0 * kuu;
    return Vec(g - g.dot(x) * x);
  };
  double fu = 0.0;
  Vec G = gradient(u, fu);
  double step = 1.0 / scale;
  for (int it = 0; it < 5000 && G.norm() > grad_tol; ++it) {
    const double gn2 = G.squaredNorm();
    double t = std::min(step * 2.0, 4.0 / scale);
    bool accepted = false;
    while (t > 1e-14 / scale) {
      Vec cand = (u + t * G).normalized();
      const double fc = o.f(cand);
      if (fc >= fu + 1e-4 * t * gn2) {
        u = cand;
        step = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    G = gradient(u, fu);
    if (G.norm() < 1e-6 * std::max(1.0, o.norm)) break;  // hand over to Newton
  }
  // Newton polish with |H| + |g| regularization; the case-B maximum is degenerate
  for (int it = 0; it < 200 && G.norm() > grad_tol && n > 1; ++it) {
    const Mat Q = complement_basis(u);
    const Mat H = 6.0 * o.op(u) - 3.0 * fu * Mat::Identity(n, n);
    const Mat hq = Q.transpose() * H * Q;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hq + hq.transpose()));
    const double gn = G.norm();
    Vec d = es.eigenvalues().cwiseAbs().array() + gn;
    const Vec gq = Q.transpose() * G;
    const Vec s = Q * (es.eigenvectors() * (es.eigenvectors().transpose() * gq).cwiseQuotient(d));
    Vec cand = (u + s).normalized();
    double fc = 0.0;
    const Vec Gc = gradient(cand, fc);
    if (!(fc >= fu - 1e-15 * std::max(1.0, std::abs(fu))) && !(Gc.norm() < gn)) break;
    u = cand;
    fu = fc;
    G = Gc;
  }
  return {u, fu, G.norm()};
}

}  // namespace

double cubic_value(const SymMatrix& h, const MixedTensor12& K, const Vec& u) {
  return h.bilinear(K.apply(u, u), u);
}

CubicMaximum maximize_cubic(const SymMatrix& h, const MixedTensor12& K, int restarts,
                            std::uint64_t seed) {
  const OrthoK o = to_ortho(h, K);
  const int n = o.n;
  if (2.0 * o.norm <= 1e-10)
    throw Error(ErrorCode::kZeroCubic, "cubic form vanishes; the point is quadric-like");
  if (restarts < 1) restarts = 1;
  const std::vector<int> primes = first_primes(n);
  bool have = false;
  AscentResult best{Vec(), -std::numeric_limits<double>::infinity(), 0.0};
  int converged = 0;
  const double conv_tol = 1e-9 * std::max(1.0, o.norm);
  for (int r = 0; r < restarts; ++r) {
    Vec start(n);
    const std::uint64_t idx = seed * static_cast<std::uint64_t>(restarts) + r + 1;
    for (int i = 0; i < n; ++i) start(i) = 2.0 * radical_inverse(idx, primes[i]) - 1.0;
    if (start.norm() < 1e-8) start(r % n) = 1.0;
    const AscentResult res = ascend(o, start);
    if (res.grad > conv_tol) continue;
    ++converged;
    // strict improvement keeps the earliest restart on ties
    if (!have || res.value > best.value + 1e-12 * std::max(1.0, o.norm)) {
      best = res;
      have = true;
    }
  }
  if (!have) throw Error(ErrorCode::kNonConvergence, "cubic maximization did not converge");
  CubicMaximum out;
  out.e1 = o.frame.e * best.u;
  out.lambda1 = best.value;
  out.stationarity = (o.apply(best.u, best.u) - best.value * best.u).norm();
  out.converged_restarts = converged;
  return out;
}

PointSpectrum spectrum_split(const SymMatrix& h, const MixedTensor12& K, const Vec& e1, int eps,
                             double tol, double delta_b) {
  const OrthoK o = to_ortho(h, K);
  const int n = o.n;
  Vec u = o.frame.e_inv * e1;
  if (!(u.norm() > 0)) throw Error(ErrorCode::kInvalidInput, "e1 must be nonzero");
  u.normalize();
  PointSpectrum s;
  s.e1 = o.frame.e * u;
  s.eps = eps;
  s.lambda1 = o.f(u);
  const double l1 = s.lambda1;
  const double disc = l1 * l1 - 4.0 * eps;
  s.eta = disc >= 0 ? 0.5 * std::sqrt(disc) : kNaN;
  s.mu = disc >= 0 ? 0.5 * (l1 - std::sqrt(disc)) : kNaN;
  if (n == 1) {
    s.tag = CaseTag::kC1;
    s.m = 1;
    return s;
  }
  const Mat Q = complement_basis(u);
  const Mat B = Q.transpose() * o.op(u) * Q;
  const SymEigen es = sym_eigen(Mat(0.5 * (B + B.transpose())));
  s.values = es.values;
  s.vectors = o.frame.e * (Q * es.vectors);
  const double t = tol * std::max(1.0, l1);
  for (int i = 0; i < n - 1; ++i) {
    const double li = s.values[i];
    s.branch_residual = std::max(s.branch_residual,
                                 std::abs((l1 - 2.0 * li) * (eps - l1 * li + li * li)));
    const double dh = std::abs(li - 0.5 * l1);
    const double dm = std::isnan(s.mu) ? std::numeric_limits<double>::infinity() : std::abs(li - s.mu);
    if (dh <= t && dh <= dm) {
      s.half_branch.push_back(i);
    } else if (dm <= t) {
      s.mu_branch.push_back(i);
    } else {
      throw Error(ErrorCode::kBranchAmbiguity,
                  "K_e1 eigenvalue " + format_double17(li) + " matches neither lambda1/2 = " +
                      format_double17(0.5 * l1) + " nor mu = " + format_double17(s.mu));
    }
  }
  s.m = 1 + static_cast<int>(s.half_branch.size());
  if (s.half_branch.size() == static_cast<size_t>(n - 1)) {
    s.tag = std::abs(disc) <= delta_b ? CaseTag::kB : CaseTag::kCn;
  } else if (s.half_branch.empty()) {
    s.tag = CaseTag::kC1;
  } else {
    s.tag = CaseTag::kCm;
  }
  return s;
}

// ---------------------------------------------------------------------- L

Vec IsotropicMap::apply(const Vec& a, const Vec& b) const {
  const int k = dim();
  Vec r = Vec::Zero(h.dim());
  for (int i = 0; i < k; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (b(j) == 0.0) continue;
      r += a(i) * b(j) * values[static_cast<size_t>(i) * k + j];
    }
  }
  return r;
}

void fill_constants(IsotropicMap& map) {
  map.sigma = 0.5 * map.lambda1 * map.eta;
  map.tau = 0.25 * map.eta * (map.eta + 0.5 * map.lambda1);
}

IsotropicMap build_L(const SymMatrix& h, const MixedTensor12& K, const PointSpectrum& spectrum,
                     double tol) {
  if (spectrum.tag != CaseTag::kCm)
    throw Error(ErrorCode::kInvalidInput, "the isotropic map needs case C_m with 2 <= m <= n-1");
  IsotropicMap L;
  L.h = h;
  L.lambda1 = spectrum.lambda1;
  L.eta = spectrum.eta;
  L.mu = spectrum.mu;
  L.eps = spectrum.eps;
  L.e1 = spectrum.e1;
  L.K = K;
  fill_constants(L);
  const int k = static_cast<int>(spectrum.half_branch.size());
  const int n = h.dim();
  L.d2.resize(n, k);
  for (int i = 0; i < k; ++i) L.d2.col(i) = spectrum.vectors.col(spectrum.half_branch[i]);
  L.values.resize(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Vec bi = L.d2.col(i), bj = L.d2.col(j);
      L.values[static_cast<size_t>(i) * k + j] =
          K.apply(bi, bj) - 0.5 * L.lambda1 * h.bilinear(bi, bj) * L.e1;
    }
  const double scale = std::max(1.0, L.sigma);
  double proj = 0.0, iso = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const Vec& l = L.values[static_cast<size_t>(i) * k + j];
      double s = std::pow(h.bilinear(l, L.e1), 2);
      for (int q = 0; q < k; ++q) s += std::pow(h.bilinear(l, L.d2.col(q)), 2);
      proj = std::max(proj, std::sqrt(s));
      Vec a = Vec::Zero(k);
      a(i) += 1.0;
      a(j) += 1.0;
      a.normalize();
      const Vec lv = L.apply(a, a);
      iso = std::max(iso, std::abs(h.bilinear(lv, lv) - L.sigma));
    }
  if (proj > 10.0 * tol * std::sqrt(scale))
    throw Error(ErrorCode::kIsotropyViolation,
                "L(v,w) leaves D3: projection " + format_double17(proj));
  if (iso > tol * scale)
    throw Error(ErrorCode::kIsotropyViolation,
                "h(L(v,v),L(v,v)) differs from lambda1*eta/2 by " + format_double17(iso));
  return L;
}

LIdentityResiduals check_L_identities(const IsotropicMap& L, int samples, std::uint64_t seed) {
  LIdentityResiduals r;
  const int k = L.dim();
  if (k == 0) return r;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto gauss = [&] {
    Vec v(k);
    for (int i = 0; i < k; ++i) v(i) = nd(rng);
    return v;
  };
  auto hl = [&](const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    return L.inner(L.apply(a, b), L.apply(c, d));
  };
  const double s = L.sigma;
  // projection onto e1 + D2 when the ambient data is available
  if (L.e1.size() > 0)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const Vec& l = L.values[static_cast<size_t>(i) * k + j];
        double acc = std::pow(L.inner(l, L.e1), 2);
        for (int q = 0; q < k; ++q) acc += std::pow(L.inner(l, L.d2.col(q)), 2);
        r.d3_projection = std::max(r.d3_projection, std::sqrt(acc));
      }
  for (int t = 0; t < samples; ++t) {
    const Vec v1 = gauss(), v2 = gauss(), v3 = gauss(), v4 = gauss();
    const double vv = v1.squaredNorm();
    r.isotropy = std::max(r.isotropy, std::abs(hl(v1, v1, v1, v1) - s * vv * vv));
    const double lhs = hl(v1, v2, v3, v4) + hl(v1, v3, v2, v4) + hl(v1, v4, v2, v3);
    const double rhs = s * (v1.dot(v2) * v3.dot(v4) + v1.dot(v3) * v2.dot(v4) + v1.dot(v4) * v2.dot(v3));
    r.linearized = std::max(r.linearized, std::abs(lhs - rhs));
    // orthonormal frame from the same samples
    const int q = std::min(4, k);
    Mat f(k, q);
    const Vec raw[4] = {v1, v2, v3, v4};
    for (int c = 0; c < q; ++c) f.col(c) = raw[c];
    Eigen::HouseholderQR<Mat> qr(f);
    const Mat on = qr.householderQ() * Mat::Identity(k, q);
    const Vec a = on.col(0);
    if (q >= 2) {
      const Vec b = on.col(1);
      r.frame2_cross = std::max(r.frame2_cross, std::abs(hl(a, a, a, b)));
      r.frame2_sum = std::max(r.frame2_sum, std::abs(hl(a, a, b, b) + 2.0 * hl(a, b, a, b) - s));
      if (q >= 3) {
        const Vec c = on.col(2);
        r.frame3 = std::max(r.frame3, std::abs(hl(a, a, b, c) + 2.0 * hl(a, b, a, c)));
        if (q >= 4) {
          const Vec d = on.col(3);
          r.frame4 = std::max(r.frame4, std::abs(hl(a, b, c, d) + hl(a, c, b, d) + hl(a, d, b, c)));
        }
      }
    }
  }
  return r;
}

POperator p_operator(const IsotropicMap& L, const Vec& v, double tol) {
  const int k = L.dim();
  if (v.size() != k) throw Error(ErrorCode::kInvalidInput, "v must be a D2 coefficient vector");
  POperator out;
  std::vector<Vec> lv(k);
  for (int i = 0; i < k; ++i) lv[i] = L.apply(v, Vec::Unit(k, i));
  out.p.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.p(i, j) = L.inner(lv[i], lv[j]);
  double sym = 0.0;
  if (L.K) {
    // P_v w = K_v L(v, w), read off in the D2 basis
    const Vec vc = L.d2 * v;
    const Mat kv = L.K->operator_of(vc);
    for (int j = 0; j < k; ++j) {
      const Vec pw = kv * lv[j];
      for (int i = 0; i < k; ++i) sym = std::max(sym, std::abs(L.inner(L.d2.col(i), pw) - out.p(i, j)));
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sym = std::max(sym, std::abs(out.p(i, j) - out.p(j, i)));
  out.symmetry_residual = sym;
  out.sigma_residual = (out.p * v - L.sigma * v).norm();
  const Vec vn = v.normalized();
  if (k > 1) {
    const Mat Q = complement_basis(vn);
    const Mat pr = Q.transpose() * out.p * Q;
    const SymEigen es = sym_eigen(Mat(0.5 * (pr + pr.transpose())));
    out.spectrum = es.values;
    out.complement_vectors = Q * es.vectors;
    for (double x : es.values)
      out.containment = std::max(out.containment, std::min(std::abs(x), std::abs(x - L.tau)));
  }
  const double t = tol * std::max(1.0, L.tau);
  if (out.containment > t || out.sigma_residual > t || out.symmetry_residual > t)
    throw Error(ErrorCode::kSpectrumViolation,
                "P_v spectrum leaves {sigma, 0, tau}: containment " + format_double17(out.containment) +
                    ", sigma residual " + format_double17(out.sigma_residual) + ", asymmetry " +
                    format_double17(out.symmetry_residual));
  return out;
}

DTwoDecomposition decompose_D2(const IsotropicMap& L, double tol) {
  const int k = L.dim();
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "D2 is empty");
  DTwoDecomposition dec;
  dec.sigma = L.sigma;
  dec.tau = L.tau;
  dec.sigma_equals_tau = std::abs(L.sigma - L.tau) < 1e-6;
  const double t = tol * std::max(1.0, L.tau);

  auto p_matrix = [&](const Vec& c) {
    Mat p(k, k);
    std::vector<Vec> lc(k);
    for (int i = 0; i < k; ++i) lc[i] = L.apply(c, Vec::Unit(k, i));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) p(i, j) = L.inner(lc[i], lc[j]);
    return p;
  };

  Mat S = Mat::Identity(k, k);
  while (S.cols() > 0) {
    Mat sum = Mat::Zero(k, k);
    for (int c = 0; c < S.cols(); ++c) sum += p_matrix(S.col(c));
    const Mat qs = S.transpose() * sum * S;
    const SymEigen top = sym_eigen(Mat(0.5 * (qs + qs.transpose())));
    Vec y = top.vectors.col(top.vectors.cols() - 1);
    fix_sign(y);
    const Vec v = (S * y).normalized();
    const POperator pv = p_operator(L, v, tol);
    dec.max_containment = std::max(dec.max_containment, pv.containment);
    dec.max_symmetry = std::max(dec.max_symmetry, pv.symmetry_residual);

    D2Block block;
    block.v = v;
    Mat next(k, 0), zero(k, 0);
    if (S.cols() > 1) {
      const Mat sperp = S * complement_basis(y);
      const Mat restricted = sperp.transpose() * pv.p * sperp;
      const SymEigen es = sym_eigen(Mat(0.5 * (restricted + restricted.transpose())));
      for (int i = 0; i < static_cast<int>(es.values.size()); ++i) {
        const double x = es.values[i];
        const Vec col = sperp * es.vectors.col(i);
        if (std::abs(x) <= t) {
          zero.conservativeResize(k, zero.cols() + 1);
          zero.col(zero.cols() - 1) = col;
        } else if (std::abs(x - L.tau) <= t) {
          next.conservativeResize(k, next.cols() + 1);
          next.col(next.cols() - 1) = col;
        } else {
          throw Error(ErrorCode::kSpectrumViolation,
                      "P_v eigenvalue " + format_double17(x) + " is neither 0 nor tau = " +
                          format_double17(L.tau));
        }
      }
    }
    block.zero_space = zero;
    dec.blocks.push_back(block);
    S = next;
  }
  dec.k0 = static_cast<int>(dec.blocks.size());
  dec.p = static_cast<int>(dec.blocks[0].zero_space.cols());
  for (const auto& b : dec.blocks)
    if (b.zero_space.cols() != dec.p)
      throw Error(ErrorCode::kBlockMismatch, "blocks of the D2 decomposition have different dimensions");

  // image dimension from the Gram matrix of all L values
  {
    const int pairs = k * (k + 1) / 2;
    Mat gram(pairs, pairs);
    std::vector<const Vec*> vals;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) vals.push_back(&L.values[static_cast<size_t>(i) * k + j]);
    for (int a = 0; a < pairs; ++a)
      for (int b = a; b < pairs; ++b) gram(a, b) = gram(b, a) = L.inner(*vals[a], *vals[b]);
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    for (int a = 0; a < pairs; ++a) dec.image_dim += es.eigenvalues()(a) > 1e-10 * top ? 1 : 0;
  }

  if (dec.k0 >= 2) {
    if (dec.p != 0 && dec.p != 1 && dec.p != 3 && dec.p != 7)
      throw Error(ErrorCode::kForbiddenP,
                  "block null-space dimension p = " + std::to_string(dec.p) + " is not 0, 1, 3 or 7");
  } else if (dec.image_dim != 1) {
    throw Error(ErrorCode::kSpectrumViolation,
                "k0 = 1 needs a one-dimensional image of L, found " + std::to_string(dec.image_dim));
  }

  dec.trace = Vec::Zero(L.h.dim());
  for (int i = 0; i < k; ++i) dec.trace += L.values[static_cast<size_t>(i) * k + i];
  dec.trace_norm = std::sqrt(std::max(0.0, L.inner(dec.trace, dec.trace)));
  dec.rho = dec.trace_norm / (1 + dec.p);
  return dec;
}

RhoCheck trace_rho_check(const DTwoDecomposition& dec, double lambda1, double eta, double mu) {
  RhoCheck r;
  r.rho_direct = dec.rho;
  const double f2 = 0.5 * dec.k0 * eta * (lambda1 + (dec.k0 - 1) * mu);
  r.rho_formula = std::sqrt(std::max(0.0, f2));
  const double gap = std::abs(dec.rho * dec.rho - f2);
  r.agree = gap < 1e-6 * std::max(1.0, std::abs(f2));
  return r;
}

int critical_dimension(int p, int k0) {
  const int m = 1 + (1 + p) * k0;
  switch (p) {
    case 0: return m * (m + 1) / 2 - 1;
    case 1: return (m + 1) * (m + 1) / 4 - 1;
    case 3: return (m + 1) * (m + 3) / 8 - 1;
    case 7: return k0 == 2 ? 26 : -1;
    default: return -1;
  }
}

// ---------------------------------------------------------------- labels

namespace {

void set_label(ClassificationReport& r, Label l, int arg = 0) {
  r.label = l;
  r.label_arg = arg;
  r.label_text = label_text(l, arg);
}

void sigma_evidence(ClassificationReport& r, double l1, double eta, double mu, int k0, double rho) {
  if (k0 == 1) {
    const double s = std::sqrt(l1 * (l1 + 2.0 * eta));
    r.evidence["sigma1"] = (l1 * l1 + 2.0 * eta * mu) / s;
    r.evidence["sigma2"] = (0.5 * l1 * l1 + l1 * eta) / s;
    r.evidence["sigma3"] = (l1 * mu + 2.0 * eta * mu) / s;
    return;
  }
  if (!(rho > 0)) return;
  const double q = std::sqrt(rho * rho + k0 * k0 * eta * eta);
  r.evidence["sigma1"] = (rho * rho * l1 + k0 * k0 * eta * eta * mu) / (rho * q);
  r.evidence["sigma2"] = (0.5 * l1 + eta) * rho / q;
  r.evidence["sigma3"] = mu * q / rho;
}

}  // namespace

ClassificationReport classify_tensors(const SymMatrix& h, const MixedTensor12& K, int eps,
                                      const ClassifyConfig& config) {
  ClassificationReport r;
  r.n = h.dim();
  r.epsilon = eps;
  set_label(r, Label::kUnrecognized);
  if (!h.is_positive_definite()) {
    r.diagnostic = "metric is not positive definite";
    return r;
  }
  const MetricFrame frame = metric_frame(h);
  const double cnorm = h_norm(lower_index(K, h), frame) * 2.0;
  r.residuals["cubic_norm"] = cnorm;
  if (cnorm <= config.zero_cubic) {
    r.tag = CaseTag::kQuadric;
    set_label(r, Label::kQuadric);
    return r;
  }
  if (r.n == 1) {
    r.diagnostic = "a curve has no typical basis";
    return r;
  }
  const CubicMaximum mx = maximize_cubic(h, K, config.restarts, config.seed);
  r.residuals["stationarity"] = mx.stationarity;
  const PointSpectrum sp = spectrum_split(h, K, mx.e1, eps, config.branch_tol, config.delta_b);
  r.spectrum = sp;
  r.tag = sp.tag;
  r.m = sp.m;
  r.lambda1 = sp.lambda1;
  r.mu = sp.mu;
  r.eta = sp.eta;
  r.residuals["branch_polynomial"] = sp.branch_residual;
  r.evidence["lambda1"] = sp.lambda1;
  r.evidence["m"] = sp.m;

  switch (sp.tag) {
    case CaseTag::kB:
      set_label(r, Label::kCaseB);
      return r;
    case CaseTag::kCn:
      r.diagnostic = "case C_n cannot occur for a parallel cubic form";
      return r;
    case CaseTag::kC1:
      r.evidence["mu"] = sp.mu;
      r.evidence["lambda2"] = sp.mu;
      set_label(r, Label::kCalabiPointFactor);
      return r;
    default:
      break;
  }

  const IsotropicMap L = build_L(h, K, sp);
  const LIdentityResiduals ids = check_L_identities(L, 20, config.seed);
  r.residuals["L_d3_projection"] = ids.d3_projection;
  r.residuals["L_isotropy"] = ids.isotropy;
  r.residuals["L_linearized"] = ids.linearized;
  r.residuals["L_frame2_cross"] = ids.frame2_cross;
  r.residuals["L_frame2_sum"] = ids.frame2_sum;
  r.residuals["L_frame3"] = ids.frame3;
  r.residuals["L_frame4"] = ids.frame4;
  const DTwoDecomposition dec = decompose_D2(L);
  r.isotropic = L;
  r.decomposition = dec;
  r.k0 = dec.k0;
  r.p = dec.p;
  r.trace_L_norm = dec.trace_norm;
  r.rho = dec.rho;
  r.residuals["P_containment"] = dec.max_containment;
  r.residuals["P_symmetry"] = dec.max_symmetry;
  const RhoCheck rc = trace_rho_check(dec, sp.lambda1, sp.eta, sp.mu);
  r.residuals["rho_squared_gap"] = std::abs(rc.rho_direct * rc.rho_direct - rc.rho_formula * rc.rho_formula);
  r.evidence["sigma"] = dec.sigma;
  r.evidence["tau"] = dec.tau;
  r.evidence["rho_formula"] = rc.rho_formula;
  r.evidence["image_dim"] = dec.image_dim;
  if (dec.sigma_equals_tau) r.evidence["sigma_equals_tau"] = 1.0;
  const int d3 = r.n - sp.m;
  r.evidence["dim_D3"] = d3;
  sigma_evidence(r, sp.lambda1, sp.eta, sp.mu, dec.k0, dec.rho);

  if (dec.k0 == 1) {
    set_label(r, d3 == 1 ? Label::kCalabiPointFactor : Label::kCalabiTwoFactor);
    return r;
  }
  const int nc = critical_dimension(dec.p, dec.k0);
  r.evidence["critical_dimension"] = nc;
  const bool trace_zero = dec.trace_norm <= config.trace_tol;
  if (trace_zero) {
    if (r.n != nc) {
      r.diagnostic = "Tr L vanishes but n = " + std::to_string(r.n) + " differs from the critical dimension " +
                     std::to_string(nc);
      return r;
    }
    const int m = sp.m;
    switch (dec.p) {
      case 0: set_label(r, Label::kSL_R, m); break;
      case 1: set_label(r, Label::kSL_C, (m + 1) / 2); break;
      case 3: set_label(r, Label::kSU_star, (m + 3) / 2); break;
      case 7: set_label(r, Label::kE6_F4); break;
      default: break;
    }
    return r;
  }
  if (nc < 0 || r.n <= nc) {
    r.diagnostic = "Tr L is nonzero but n = " + std::to_string(r.n) + " does not exceed the critical dimension " +
                   std::to_string(nc);
    return r;
  }
  set_label(r, r.n == nc + 1 ? Label::kCalabiPointFactor : Label::kCalabiTwoFactor);
  return r;
}

ClassificationReport classify_point(const ImmersionChart& chart, const std::vector<double>& point,
                                    const ClassifyConfig& config) {
  const CentroaffinePointData d = invariants_at(chart, point);
  double par = 0.0;
  if (config.check_parallel) {
    par = parallel_residual(d);
    if (par > config.parallel_tol) {
      ClassificationReport r;
      r.n = d.n;
      r.epsilon = d.epsilon;
      set_label(r, Label::kUnrecognized);
      r.residuals["parallel"] = par;
      r.diagnostic = "cubic form is not parallel at this point";
      return r;
    }
  }
  ClassificationReport r = classify_tensors(d.h, d.K, d.epsilon, config);
  if (config.check_parallel) r.residuals["parallel"] = par;
  r.evidence["signature"] = d.signature;
  return r;
}

}  // namespace caffine
