// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/calabi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "caffine/classify.hpp"
#include "caffine/error.hpp"

namespace caffine {

namespace {

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || std::abs(lambda) < 1e-12 || std::abs(lambda + 1.0) < 1e-12)
    throw Error(ErrorCode::kInvalidLambda, "lambda must differ from 0 and -1, got " + format_double17(lambda));
}

NodePtr times(NodePtr a, NodePtr b) { return make_node(Op::kMul, std::move(a), std::move(b)); }

}  // namespace

ImmersionChart compose(const CalabiSpec& spec) {
  check_lambda(spec.lambda);
  if (!(spec.u_interval.first < spec.u_interval.second))
    throw Error(ErrorCode::kInvalidInput, "u_interval must satisfy lo < hi");
  const ImmersionChart& a = spec.left;
  const int n1 = a.n;
  const int n2 = spec.right ? spec.right->n : 0;
  if (!spec.right && spec.point.empty()) throw Error(ErrorCode::kInvalidInput, "point factor needs coordinates");
  const int n = 1 + n1 + n2;

  ImmersionChart out;
  out.n = n;
  const NodePtr grow = make_node(Op::kExp, make_var(0));
  const NodePtr shrink = make_node(Op::kExp, times(make_const(-spec.lambda), make_var(0)));
  for (const Expr& c : a.components) out.components.emplace_back(times(grow, c.shifted(1, n).root()), n);
  if (spec.right) {
    for (const Expr& c : spec.right->components)
      out.components.emplace_back(times(shrink, c.shifted(1 + n1, n).root()), n);
  } else {
    for (double c : spec.point) out.components.emplace_back(times(make_const(c), shrink), n);
  }
  out.domain.push_back(spec.u_interval);
  out.domain.insert(out.domain.end(), a.domain.begin(), a.domain.end());
  if (spec.right) out.domain.insert(out.domain.end(), spec.right->domain.begin(), spec.right->domain.end());
  out.params = a.params;
  if (spec.right)
    for (const auto& [k, v] : spec.right->params) out.params.emplace(k, v);
  out.params["lambda"] = spec.lambda;
  const std::string rname = spec.right ? spec.right->name : std::string("point");
  out.name = "calabi(" + a.name + "," + rname + "," + format_double17(spec.lambda) + ")";
  return out;
}

namespace {

ImmersionChart chart_ref(const nlohmann::json& j, const std::string& base_dir, const char* where) {
  if (j.is_string()) {
    std::string path = j.get<std::string>();
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read chart file " + path, where);
    std::stringstream ss;
    ss << in.rdbuf();
    return chart_from_json(ss.str());
  }
  if (j.is_object()) return chart_from_json(j.dump());
  throw Error(ErrorCode::kInvalidInput, "expected a chart path or chart object", where);
}

}  // namespace

CalabiSpec calabi_spec_from_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed Calabi spec: ") + e.what(),
                "byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "Calabi spec must be an object");
  for (const char* key : {"lambda", "left", "right"})
    if (!j.contains(key)) throw Error(ErrorCode::kInvalidInput, std::string("Calabi spec lacks \"") + key + "\"", key);
  CalabiSpec spec;
  try {
    spec.lambda = j.at("lambda").get<double>();
    spec.left = chart_ref(j.at("left"), base_dir, "left");
    const auto& r = j.at("right");
    if (r.is_object() && r.contains("point")) {
      spec.point = r.at("point").get<std::vector<double>>();
    } else {
      spec.right = chart_ref(r, base_dir, "right");
    }
    if (j.contains("u_interval")) {
      const auto iv = j.at("u_interval").get<std::vector<double>>();
      if (iv.size() != 2) throw Error(ErrorCode::kInvalidInput, "u_interval must be [lo, hi]", "u_interval");
      spec.u_interval = {iv[0], iv[1]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("Calabi spec has wrong types: ") + e.what());
  }
  check_lambda(spec.lambda);
  return spec;
}

MetricPrediction predicted_metric_signature(double lambda, const FactorSignature& left,
                                            const std::optional<FactorSignature>& right) {
  check_lambda(lambda);
  MetricPrediction p;
  p.u_block = lambda;
  p.left_block = lambda / (1.0 + lambda);
  p.right_block = right ? 1.0 / (1.0 + lambda) : 0.0;
  const int n1 = left.n, N1 = left.N;
  if (right) {
    const int n2 = right->n, N2 = right->N;
    if (lambda > 0) p.signature = N1 + N2;
    else if (lambda > -1) p.signature = n1 + 1 - N1 + N2;
    else p.signature = n2 + 1 + N1 - N2;
  } else {
    if (lambda > 0) p.signature = N1;
    else if (lambda > -1) p.signature = n1 + 1 - N1;
    else p.signature = N1 + 1;
  }
  return p;
}

// ----------------------------------------------------------------- detect

namespace {

struct FrameK {
  int n = 0;
  MetricFrame frame;
  std::vector<double> k;  // [c][a][b]
  Vec s;                  // frame signs
  double norm = 0.0;

  double at(int c, int a, int b) const { return k[(static_cast<size_t>(c) * n + a) * n + b]; }
  Mat op(const Vec& t) const {
    Mat m = Mat::Zero(n, n);
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) acc += at(c, a, b) * t(a);
        m(c, b) = acc;
      }
    return m;
  }
  double h(const Vec& x, const Vec& y) const { return x.dot(s.asDiagonal() * y); }
};

// Basis (Euclidean-orthonormal columns) of the null space of a row vector.
Mat null_space_of_row(const Vec& row) {
  const int n = static_cast<int>(row.size());
  Eigen::JacobiSVD<Mat> svd(Mat(row.transpose()), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(n - 1);
}

// Solutions of K(T,T) = lam T, T.T = 1 from deterministic starts, up to sign.
std::vector<Vec> newton_directions(const FrameK& fk, int starts) {
  const int n = fk.n;
  std::vector<Vec> found;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> nd;
  for (int s = 0; s < starts; ++s) {
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = nd(rng);
    t.normalize();
    double lam = t.dot(fk.op(t) * t);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Mat A = fk.op(t);
      Vec F(n + 1);
      F.head(n) = A * t - lam * t;
      F(n) = 0.5 * (t.squaredNorm() - 1.0);
      if (F.norm() < 1e-13 * std::max(1.0, fk.norm)) {
        ok = true;
        break;
      }
      Mat J = Mat::Zero(n + 1, n + 1);
      J.topLeftCorner(n, n) = 2.0 * A - lam * Mat::Identity(n, n);
      J.topRightCorner(n, 1) = -t;
      J.bottomLeftCorner(1, n) = t.transpose();
      const Vec step = J.colPivHouseholderQr().solve(F);
      if (!step.allFinite()) break;
      t -= step.head(n);
      lam -= step(n);
    }
    if (!ok) continue;
    t.normalize();
    bool dup = false;
    for (const Vec& f : found)
      if (std::abs(std::abs(f.dot(t)) - 1.0) < 1e-8) dup = true;
    if (!dup) found.push_back(t);
  }
  return found;
}

struct Eigenspace {
  double value;
  Mat basis;  // columns in the complement coordinates
};

// Real eigen-decomposition of a diagonalizable matrix, clustered; empty on failure.
std::vector<Eigenspace> real_eigenspaces(const Mat& m, double tol) {
  const int d = static_cast<int>(m.rows());
  std::vector<Eigenspace> out;
  if (d == 0) return out;
  Eigen::EigenSolver<Mat> es(m, false);
  std::vector<double> vals;
  const double scale = std::max(1.0, m.norm());
  for (int i = 0; i < d; ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) > tol * scale) return {};
    vals.push_back(es.eigenvalues()(i).real());
  }
  std::sort(vals.begin(), vals.end());
  const auto clusters = cluster_eigenvalues(vals, tol);
  int total = 0;
  for (const auto& c : clusters) {
    double mean = 0.0;
    for (int i : c) mean += vals[i];
    mean /= static_cast<double>(c.size());
    Eigen::JacobiSVD<Mat> svd(m - mean * Mat::Identity(d, d), Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    int null = 0;
    for (int i = 0; i < d; ++i) null += sv(i) <= 10.0 * tol * scale ? 1 : 0;
    if (null != static_cast<int>(c.size())) return {};  // not diagonalizable at this tolerance
    out.push_back({mean, svd.matrixV().rightCols(null)});
    total += null;
  }
  if (total != d) return {};
  return out;
}

std::optional<CalabiStructure> try_candidate(const FrameK& fk, Vec t, int eps, const DetectOptions& opt,
                                             const std::string& source) {
  const int n = fk.n;
  const double tol = opt.tol;
  const double htt = fk.h(t, t);
  if (!(std::abs(htt) > 1e-8 * t.squaredNorm())) return std::nullopt;
  t /= std::sqrt(std::abs(htt));
  // orientation
  bool oriented = false;
  if (opt.reference) {
    // coordinate dot product: h may be indefinite
    const double hr = (fk.frame.e * t).dot(*opt.reference);
    if (std::abs(hr) > tol) {
      if (hr < 0) t = -t;
      oriented = true;
    }
  }
  Mat A = fk.op(t);
  Vec ktt = A * t;
  double l1 = fk.h(ktt, t) / fk.h(t, t);
  if (!oriented) {
    if (std::abs(l1) > tol) {
      if (l1 < 0) t = -t;
    } else {
      fix_sign(t);
    }
    A = fk.op(t);
    ktt = A * t;
    l1 = fk.h(ktt, t) / fk.h(t, t);
  }
  const double scale = std::max(1.0, fk.norm);
  double residual = (ktt - l1 * t).norm();
  if (residual > tol * scale) return std::nullopt;
  if (n == 1) return std::nullopt;

  const Mat Q = null_space_of_row(fk.s.asDiagonal() * t);  // h-complement of T
  const Mat M = Q.transpose() * A * Q;
  residual = std::max(residual, (A * Q - Q * M).norm());
  const auto spaces = real_eigenspaces(M, tol);
  if (spaces.empty() || spaces.size() > 2) return std::nullopt;

  CalabiStructure cs;
  cs.T = fk.frame.e * t;
  cs.lambda1 = l1;
  cs.source = source;
  const double sep = tol * std::max(1.0, std::abs(l1));
  if (spaces.size() == 1) {
    const double l2 = spaces[0].value;
    if (std::abs(l1 - 2.0 * l2) <= sep) return std::nullopt;
    cs.point_factor = true;
    cs.lambda2 = l2;
    cs.lambda3 = l1 - l2;
    cs.d2 = fk.frame.e * (Q * spaces[0].basis);
    cs.d2_dim = static_cast<int>(spaces[0].basis.cols());
    cs.d3 = Mat(n, 0);
    cs.exact_form = std::abs(l1 * l2 - l2 * l2 - eps) <= tol;
  } else {
    const Eigenspace& hi = spaces[0].value > spaces[1].value ? spaces[0] : spaces[1];
    const Eigenspace& lo = spaces[0].value > spaces[1].value ? spaces[1] : spaces[0];
    const double l2 = hi.value, l3 = lo.value;
    if (std::abs(l2 - l3) <= sep || std::abs(l1 - 2.0 * l2) <= sep || std::abs(l1 - 2.0 * l3) <= sep)
      return std::nullopt;
    const Mat V = Q * hi.basis, W = Q * lo.basis;
    double kvw = 0.0;
    for (int i = 0; i < V.cols(); ++i) kvw = std::max(kvw, (fk.op(V.col(i)) * W).norm());
    if (kvw > tol * scale) return std::nullopt;
    residual = std::max(residual, kvw);
    cs.lambda2 = l2;
    cs.lambda3 = l3;
    cs.d2 = fk.frame.e * V;
    cs.d3 = fk.frame.e * W;
    cs.d2_dim = static_cast<int>(V.cols());
    cs.d3_dim = static_cast<int>(W.cols());
    cs.exact_form = std::abs(l2 * l3 - eps) <= tol && std::abs(l1 - l2 - l3) <= tol;
  }
  cs.residual = residual;
  return cs;
}

}  // namespace

std::optional<CalabiStructure> detect_calabi_direction(const SymMatrix& h, const MixedTensor12& K, int eps,
                                                       const DetectOptions& options) {
  FrameK fk;
  fk.n = h.dim();
  if (K.dim() != fk.n || fk.n < 2) return std::nullopt;
  try {
    fk.frame = metric_frame(h);
  } catch (const Error&) {
    return std::nullopt;
  }
  fk.k = frame_mixed(K, fk.frame);
  fk.s.resize(fk.n);
  for (int i = 0; i < fk.n; ++i) fk.s(i) = fk.frame.signs[i];
  double acc = 0.0;
  for (double v : fk.k) acc += v * v;
  fk.norm = std::sqrt(acc);
  if (fk.norm <= 1e-10) return std::nullopt;

  std::vector<std::pair<Vec, std::string>> cands;
  // Tchebychev vector: T^c = (1/n) sum_a s_a K^c_{aa}
  Vec tv = Vec::Zero(fk.n);
  for (int c = 0; c < fk.n; ++c)
    for (int a = 0; a < fk.n; ++a) tv(c) += fk.s(a) * fk.at(c, a, a) / fk.n;
  if (tv.norm() > 1e-10) {
    cands.emplace_back(tv, "tchebychev");
    Eigen::EigenSolver<Mat> es(fk.op(tv));
    for (int i = 0; i < fk.n; ++i)
      if (es.eigenvectors().col(i).imag().norm() < 1e-10)
        cands.emplace_back(es.eigenvectors().col(i).real(), "tchebychev-eigen");
  }
  if (h.is_positive_definite()) {
    try {
      const CubicMaximum mx = maximize_cubic(h, K);
      const Vec e1 = fk.frame.e_inv * mx.e1;
      cands.emplace_back(e1, "typical-e1");
      const SymEigen es = sym_eigen(Mat(0.5 * (fk.op(e1) + fk.op(e1).transpose())));
      for (int i = 0; i < fk.n; ++i) cands.emplace_back(es.vectors.col(i), "typical-eigen");
    } catch (const Error&) {
    }
  }
  for (const Vec& t : newton_directions(fk, options.newton_starts)) cands.emplace_back(t, "newton");

  std::optional<CalabiStructure> first;
  for (const auto& [t, src] : cands) {
    auto cs = try_candidate(fk, t, eps, options, src);
    if (!cs) continue;
    if (cs->exact_form) return cs;
    if (!first) first = cs;
  }
  return first;
}

CalabiSplit decompose_pointwise(const ImmersionChart& chart, const std::vector<double>& point,
                                const CalabiStructure& s, double u) {
  const double gap = s.lambda2 - s.lambda3;
  if (std::abs(gap) <= 1e-9 * std::max(1.0, std::abs(s.lambda2)))
    throw Error(ErrorCode::kStructureInvalid, "lambda2 equals lambda3; the split is undefined");
  if (std::abs(s.lambda2) <= 1e-12) throw Error(ErrorCode::kStructureInvalid, "lambda2 vanishes");
  const CentroaffinePointData d = invariants_at(chart, point);
  if (s.T.size() != d.n) throw Error(ErrorCode::kInvalidInput, "structure dimension differs from the chart");
  const Vec t_amb = d.tangent * s.T;
  CalabiSplit out;
  out.f = std::exp(-u) / gap;
  out.g = std::exp(-(s.lambda3 / s.lambda2) * u) / gap;
  out.psi1 = out.f * (t_amb - s.lambda3 * d.position);
  out.psi2 = out.g * (s.lambda2 * d.position - t_amb);
  return out;
}

}  // namespace caffine
