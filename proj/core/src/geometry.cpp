// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "caffine/error.hpp"

namespace caffine {

// ------------------------------------------------------------------ charts

std::vector<double> ImmersionChart::center() const {
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = 0.5 * (domain[i].first + domain[i].second);
  return c;
}

bool ImmersionChart::contains(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != n) return false;
  for (int i = 0; i < n; ++i)
    if (point[i] < domain[i].first || point[i] > domain[i].second) return false;
  return true;
}

ImmersionChart make_chart(std::string name, int n, const std::vector<std::string>& components,
                          std::vector<std::pair<double, double>> domain,
                          std::map<std::string, double> params) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "chart dimension must be positive");
  if (static_cast<int>(components.size()) != n + 1)
    throw Error(ErrorCode::kInvalidInput, "chart needs n+1 components");
  if (static_cast<int>(domain.size()) != n)
    throw Error(ErrorCode::kInvalidInput, "chart domain needs n intervals");
  for (const auto& [lo, hi] : domain)
    if (!(lo < hi)) throw Error(ErrorCode::kInvalidInput, "empty domain interval");
  ImmersionChart c;
  c.name = std::move(name);
  c.n = n;
  c.domain = std::move(domain);
  c.params = std::move(params);
  for (size_t i = 0; i < components.size(); ++i) {
    try {
      c.components.push_back(parse(components[i], n, c.params));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (component " + std::to_string(i + 1) + ")",
                  "components[" + std::to_string(i) + "] " + e.location());
    }
  }
  return c;
}

namespace {

size_t idx3(int n, int a, int b, int c) { return (static_cast<size_t>(a) * n + b) * n + c; }
size_t idx4(int n, int a, int b, int c, int d) {
  return ((static_cast<size_t>(a) * n + b) * n + c) * n + d;
}

int pair_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

// Gauss-formula coefficients as jets of order jet_order - 2.
struct GaussJets {
  int n = 0;
  int r = 0;
  std::vector<std::vector<Jet>> coef;  // [pair][k], k = n is the position coefficient
  Vec x;
  Mat dx;
};

GaussJets gauss_jets(const ImmersionChart& chart, const std::vector<double>& point, int jet_order) {
  const int n = chart.n, N = n + 1;
  if (static_cast<int>(point.size()) != n)
    throw Error(ErrorCode::kInvalidInput, "point dimension does not match chart");
  const int r = jet_order - 2;

  std::vector<Jet> comp;
  comp.reserve(N);
  for (int c = 0; c < N; ++c) comp.push_back(eval_jet(chart.components[c], point, jet_order));

  std::vector<std::vector<Jet>> d(N);  // first derivatives
  for (int row = 0; row < N; ++row)
    for (int j = 0; j < n; ++j) d[row].push_back(comp[row].derivative(j));

  std::vector<Jet> F(static_cast<size_t>(N) * N);  // F' (no constant term)
  Mat F0(N, N);
  for (int row = 0; row < N; ++row) {
    for (int j = 0; j < n; ++j) F[row * N + j] = d[row][j].truncated(r);
    F[row * N + n] = comp[row].truncated(r);
    for (int col = 0; col < N; ++col) {
      F0(row, col) = F[row * N + col][0];
      F[row * N + col][0] = 0.0;
    }
  }

  GaussJets out;
  out.n = n;
  out.r = r;
  out.x.resize(N);
  out.dx.resize(N, n);
  for (int row = 0; row < N; ++row) {
    out.x(row) = F0(row, n);
    for (int j = 0; j < n; ++j) out.dx(row, j) = F0(row, j);
  }

  Eigen::JacobiSVD<Mat> svd(F0);
  const auto sv = svd.singularValues();
  if (!(sv(N - 1) > 1e-10 * sv(0)))
    throw Error(ErrorCode::kDegenerateFrame,
                "tangent frame and position vector are linearly dependent");
  const Mat inv = F0.fullPivLu().inverse();

  const int size = comp[0].truncated(r).size();
  out.coef.resize(static_cast<size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<Jet> b;
      b.reserve(N);
      for (int row = 0; row < N; ++row) b.push_back(d[row][i].derivative(j));
      auto apply_inverse = [&](const std::vector<Jet>& rhs) {
        std::vector<Jet> c(N, Jet(n, r));
        Vec col(N);
        for (int k = 0; k < size; ++k) {
          for (int row = 0; row < N; ++row) col(row) = rhs[row][k];
          const Vec sol = inv * col;
          for (int row = 0; row < N; ++row) c[row][k] = sol(row);
        }
        return c;
      };
      std::vector<Jet> c = apply_inverse(b);
      // each pass fixes one more Taylor degree
      for (int it = 0; it < r; ++it) {
        std::vector<Jet> rhs = b;
        for (int row = 0; row < N; ++row)
          for (int col = 0; col < N; ++col) rhs[row] -= F[row * N + col] * c[col];
        c = apply_inverse(rhs);
      }
      out.coef[pair_index(i, j, n)] = std::move(c);
    }
  return out;
}

struct EpsChoice {
  int epsilon;
  int signature;
  bool convex;
};

// pos is the position coefficient matrix, i.e. h for eps = -1.
EpsChoice choose_epsilon(const SymMatrix& pos) {
  const SymEigen es = sym_eigen(pos);
  const int n = pos.dim();
  double scale = 0.0;
  for (double v : es.values) scale = std::max(scale, std::abs(v));
  for (double v : es.values)
    if (!(std::abs(v) > 1e-12 * scale) || scale == 0.0)
      throw Error(ErrorCode::kDegenerateMetric, "centroaffine metric is singular");
  int neg = 0;
  for (double v : es.values) neg += v < 0 ? 1 : 0;
  if (neg == 0) return {-1, neg, true};
  if (neg == n) return {1, neg, true};
  // neither sign is definite: fewer negative directions wins, ties go to -1
  return {(n - neg) < neg ? 1 : -1, neg, false};
}

struct PointArrays {
  int n;
  std::vector<double> h, dh, ddh;  // h_ij, d_m h_ij, d_m d_p h_ij
  std::vector<double> g, dg;       // Gamma^k_ij, d_m Gamma^k_ij
};

PointArrays extract(const GaussJets& gj, int eps) {
  const int n = gj.n;
  PointArrays a;
  a.n = n;
  const size_t n2 = static_cast<size_t>(n) * n;
  a.h.assign(n2, 0.0);
  a.dh.assign(n2 * n, 0.0);
  a.ddh.assign(n2 * n2, 0.0);
  a.g.assign(n2 * n, 0.0);
  a.dg.assign(n2 * n2, 0.0);
  const auto table = MultiIndexTable::get(n);
  std::vector<int> second(n2, -1);
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) second[m * n + p] = table->shifted(1 + m, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::vector<Jet>& c = gj.coef[pair_index(i, j, n)];
      const Jet& hx = c[n];
      const double s = -static_cast<double>(eps);
      a.h[i * n + j] = s * hx[0];
      if (gj.r >= 1)
        for (int m = 0; m < n; ++m) a.dh[idx3(n, m, i, j)] = s * hx[1 + m];
      if (gj.r >= 2)
        for (int m = 0; m < n; ++m)
          for (int p = 0; p < n; ++p)
            a.ddh[idx4(n, m, p, i, j)] = s * hx[second[m * n + p]] * (m == p ? 2.0 : 1.0);
      for (int k = 0; k < n; ++k) {
        a.g[idx3(n, k, i, j)] = c[k][0];
        if (gj.r >= 1)
          for (int m = 0; m < n; ++m) a.dg[idx4(n, m, k, i, j)] = c[k][1 + m];
      }
    }
  return a;
}

SymMatrix sym_from_flat(const std::vector<double>& a, int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, 0.5 * (a[i * n + j] + a[j * n + i]));
  return m;
}

MixedTensor12 mixed_from_flat(const std::vector<double>& a, int n) {
  MixedTensor12 t(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) t.set(k, i, j, 0.5 * (a[idx3(n, k, i, j)] + a[idx3(n, k, j, i)]));
  return t;
}

// Levi-Civita symbols and their first derivatives from h, dh, ddh.
void levi_civita_arrays(const PointArrays& a, const Mat& hinv, std::vector<double>& glc,
                        std::vector<double>* dglc) {
  const int n = a.n;
  glc.assign(static_cast<size_t>(n) * n * n, 0.0);
  // first-kind symbols [ij,l] = 1/2 (d_i h_jl + d_j h_il - d_l h_ij)
  std::vector<double> first(static_cast<size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        first[idx3(n, i, j, l)] =
            0.5 * (a.dh[idx3(n, i, j, l)] + a.dh[idx3(n, j, i, l)] - a.dh[idx3(n, l, i, j)]);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += hinv(k, l) * first[idx3(n, i, j, l)];
        glc[idx3(n, k, i, j)] = s;
      }
  if (dglc == nullptr) return;
  dglc->assign(static_cast<size_t>(n) * n * n * n, 0.0);
  // d_m h^{kl} = -h^{ka} d_m h_ab h^{bl}
  std::vector<double> dhinv(static_cast<size_t>(n) * n * n);
  for (int m = 0; m < n; ++m) {
    Mat dm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dm(i, j) = a.dh[idx3(n, m, i, j)];
    const Mat r = -hinv * dm * hinv;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) dhinv[idx3(n, m, k, l)] = r(k, l);
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double dfirst = 0.5 * (a.ddh[idx4(n, m, i, j, l)] + a.ddh[idx4(n, m, j, i, l)] -
                                       a.ddh[idx4(n, m, l, i, j)]);
          const double f = first[idx3(n, i, j, l)];
          for (int k = 0; k < n; ++k)
            (*dglc)[idx4(n, m, k, i, j)] += dhinv[idx3(n, m, k, l)] * f + hinv(k, l) * dfirst;
        }
}

}  // namespace

// ------------------------------------------------------------------- norms

double h_norm(const std::vector<double>& t, int up, int down, const MetricFrame& f) {
  const int rank = up + down;
  if (rank == 0) return t.empty() ? 0.0 : std::abs(t[0]);
  const int n = static_cast<int>(f.e.rows());
  std::vector<double> cur = t, next(t.size());
  size_t stride = 1;
  for (int s = rank - 1; s >= 0; --s) {
    const Mat& m = s < up ? f.e_inv : f.e;  // up: new_a = sum_i einv(a,i) t_i ; down: sum_i t_i e(i,a)
    const size_t block = stride * n;
    for (size_t base = 0; base < cur.size(); base += block)
      for (size_t inner = 0; inner < stride; ++inner)
        for (int a = 0; a < n; ++a) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i) {
            const double coef = s < up ? m(a, i) : m(i, a);
            acc += coef * cur[base + i * stride + inner];
          }
          next[base + a * stride + inner] = acc;
        }
    std::swap(cur, next);
    stride *= n;
  }
  double sum = 0.0;
  for (double v : cur) sum += v * v;
  return std::sqrt(sum);
}

double h_norm(const Sym3Tensor& t, const MetricFrame& f) {
  const std::vector<double> fr = frame_sym3(t, f);
  double s = 0.0;
  for (double v : fr) s += v * v;
  return std::sqrt(s);
}

double h_norm(const MixedTensor12& t, const MetricFrame& f) {
  const std::vector<double> fr = frame_mixed(t, f);
  double s = 0.0;
  for (double v : fr) s += v * v;
  return std::sqrt(s);
}

// -------------------------------------------------------------- invariants

FrameResult centroaffine_frame(const ImmersionChart& chart, const std::vector<double>& point) {
  const GaussJets gj = gauss_jets(chart, point, 2);
  const int n = chart.n;
  SymMatrix pos(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pos.set(i, j, gj.coef[pair_index(i, j, n)][n][0]);
  const EpsChoice ec = choose_epsilon(pos);
  const PointArrays a = extract(gj, ec.epsilon);
  FrameResult out;
  out.epsilon = ec.epsilon;
  out.signature = ec.signature;
  out.convex = ec.convex;
  out.h = sym_from_flat(a.h, n);
  out.gamma = mixed_from_flat(a.g, n);
  return out;
}

MixedTensor12 levi_civita(const ImmersionChart& chart, const std::vector<double>& point,
                          double* metric_compat_residual) {
  const GaussJets gj = gauss_jets(chart, point, 3);
  const int n = chart.n;
  SymMatrix pos(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pos.set(i, j, gj.coef[pair_index(i, j, n)][n][0]);
  const EpsChoice ec = choose_epsilon(pos);
  const PointArrays a = extract(gj, ec.epsilon);
  const SymMatrix h = sym_from_flat(a.h, n);
  const Mat hinv = h.dense().inverse();
  std::vector<double> glc;
  levi_civita_arrays(a, hinv, glc, nullptr);
  if (metric_compat_residual != nullptr) {
    std::vector<double> r(static_cast<size_t>(n) * n * n);
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = a.dh[idx3(n, m, i, j)];
          for (int l = 0; l < n; ++l)
            s -= glc[idx3(n, l, m, i)] * a.h[l * n + j] + glc[idx3(n, l, m, j)] * a.h[i * n + l];
          r[idx3(n, m, i, j)] = s;
        }
    *metric_compat_residual = h_norm(r, 0, 3, metric_frame(h));
  }
  return mixed_from_flat(glc, n);
}

CentroaffinePointData invariants_at(const ImmersionChart& chart, const std::vector<double>& point) {
  const GaussJets gj = gauss_jets(chart, point, 4);
  const int n = chart.n;
  SymMatrix pos(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pos.set(i, j, gj.coef[pair_index(i, j, n)][n][0]);
  const EpsChoice ec = choose_epsilon(pos);
  const PointArrays a = extract(gj, ec.epsilon);

  CentroaffinePointData d;
  d.n = n;
  d.point = point;
  d.epsilon = ec.epsilon;
  d.signature = ec.signature;
  d.convex = ec.convex;
  d.position = gj.x;
  d.tangent = gj.dx;
  d.h = sym_from_flat(a.h, n);
  d.frame = metric_frame(d.h);
  const Mat hinv = d.h.dense().inverse();

  std::vector<double> glc, dglc;
  levi_civita_arrays(a, hinv, glc, &dglc);
  d.gamma = mixed_from_flat(a.g, n);
  d.gamma_lc = mixed_from_flat(glc, n);

  const size_t n3 = static_cast<size_t>(n) * n * n;
  std::vector<double> k(n3);
  for (size_t t = 0; t < n3; ++t) k[t] = a.g[t] - glc[t];
  d.K = mixed_from_flat(k, n);

  // metric compatibility of the Levi-Civita symbols
  {
    std::vector<double> r(n3);
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = a.dh[idx3(n, m, i, j)];
          for (int l = 0; l < n; ++l)
            s -= glc[idx3(n, l, m, i)] * a.h[l * n + j] + glc[idx3(n, l, m, j)] * a.h[i * n + l];
          r[idx3(n, m, i, j)] = s;
        }
    d.metric_compat = h_norm(r, 0, 3, d.frame);
  }

  // C = nabla h with the induced connection, and C = -2 h(K., .)
  std::vector<double> c_nabla(n3), c_k(n3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = a.dh[idx3(n, i, j, l)];
        double t = 0.0;
        for (int q = 0; q < n; ++q) {
          s -= a.g[idx3(n, q, i, j)] * a.h[q * n + l] + a.g[idx3(n, q, i, l)] * a.h[j * n + q];
          t += a.h[l * n + q] * k[idx3(n, q, i, j)];
        }
        c_nabla[idx3(n, i, j, l)] = s;
        c_k[idx3(n, i, j, l)] = -2.0 * t;
      }
  {
    std::vector<double> diff(n3);
    for (size_t t = 0; t < n3; ++t) diff[t] = c_nabla[t] - c_k[t];
    d.c_cross_check = h_norm(diff, 0, 3, d.frame);
    const double scale = std::max(1.0, h_norm(c_k, 0, 3, d.frame));
    if (d.c_cross_check > 1e-7 * scale)
      throw Error(ErrorCode::kCrossCheckFailure,
                  "cubic form from nabla h disagrees with -2h(K.,.): residual " +
                      format_double17(d.c_cross_check));
  }
  d.C = Sym3Tensor(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = j; l < n; ++l) {
        double s = 0.0;
        const int perm[6][3] = {{i, j, l}, {i, l, j}, {j, i, l}, {j, l, i}, {l, i, j}, {l, j, i}};
        for (const auto& p : perm) s += c_k[idx3(n, p[0], p[1], p[2])];
        d.C.set(i, j, l, s / 6.0);
      }

  // Tchebychev form and vector
  d.tcheb_form = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += k[idx3(n, j, i, j)];
    d.tcheb_form(i) = s / n;
  }
  d.tcheb_vector = hinv * d.tcheb_form;

  // traceless part: -C/2 - n/(n+2) (T(X)h(Y,Z) + T(Y)h(X,Z) + T(Z)h(X,Y))
  d.traceless = Sym3Tensor(n);
  const double w = static_cast<double>(n) / (n + 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = j; l < n; ++l) {
        const double tt = d.tcheb_form(i) * a.h[j * n + l] + d.tcheb_form(j) * a.h[i * n + l] +
                          d.tcheb_form(l) * a.h[i * n + j];
        d.traceless.set(i, j, l, -0.5 * d.C(i, j, l) - w * tt);
      }

  // curvature R^l_{kij}
  const size_t n4 = n3 * n;
  d.curvature.assign(n4, 0.0);
  for (int l = 0; l < n; ++l)
    for (int kk = 0; kk < n; ++kk)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dglc[idx4(n, i, l, j, kk)] - dglc[idx4(n, j, l, i, kk)];
          for (int m = 0; m < n; ++m)
            s += glc[idx3(n, l, i, m)] * glc[idx3(n, m, j, kk)] -
                 glc[idx3(n, l, j, m)] * glc[idx3(n, m, i, kk)];
          d.curvature[idx4(n, l, kk, i, j)] = s;
        }

  // nabla-hat C from C = nabla h: first d_m C_ijk, then the connection terms
  d.nabla_c.assign(n4, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = a.ddh[idx4(n, m, i, j, l)];
          for (int q = 0; q < n; ++q) {
            s -= a.dg[idx4(n, m, q, i, j)] * a.h[q * n + l] + a.g[idx3(n, q, i, j)] * a.dh[idx3(n, m, q, l)];
            s -= a.dg[idx4(n, m, q, i, l)] * a.h[j * n + q] + a.g[idx3(n, q, i, l)] * a.dh[idx3(n, m, j, q)];
          }
          for (int q = 0; q < n; ++q) {
            s -= glc[idx3(n, q, m, i)] * c_nabla[idx3(n, q, j, l)];
            s -= glc[idx3(n, q, m, j)] * c_nabla[idx3(n, i, q, l)];
            s -= glc[idx3(n, q, m, l)] * c_nabla[idx3(n, i, j, q)];
          }
          d.nabla_c[idx4(n, m, i, j, l)] = s;
        }
  return d;
}

double parallel_residual(const CentroaffinePointData& d) {
  const double nc = h_norm(d.nabla_c, 0, 4, d.frame);
  const double c = h_norm(d.C, d.frame);
  return c > 1e-10 ? nc / c : nc;
}

IntegrabilityReport check_integrability(const CentroaffinePointData& d) {
  const int n = d.n;
  const size_t n3 = static_cast<size_t>(n) * n * n, n4 = n3 * n;
  IntegrabilityReport rep;
  const MixedTensor12& K = d.K;

  // [K_i, K_j] applied to d_k, upper index l
  std::vector<double> gauss(n4);
  for (int l = 0; l < n; ++l)
    for (int kk = 0; kk < n; ++kk)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double comm = 0.0;
          for (int m = 0; m < n; ++m) comm += K(l, i, m) * K(m, j, kk) - K(l, j, m) * K(m, i, kk);
          const double wedge =
              d.epsilon * ((l == i ? d.h(j, kk) : 0.0) - (l == j ? d.h(i, kk) : 0.0));
          gauss[idx4(n, l, kk, i, j)] = d.curvature[idx4(n, l, kk, i, j)] - (wedge - comm);
        }
  rep.gauss = h_norm(gauss, 1, 3, d.frame);

  std::vector<double> cod(n4);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          cod[idx4(n, m, i, j, l)] = d.nabla_c[idx4(n, m, i, j, l)] - d.nabla_c[idx4(n, i, m, j, l)];
  rep.codazzi = h_norm(cod, 0, 4, d.frame);

  // (R(X,Y).K)(Z,U) = R(X,Y)K(Z,U) - K(R(X,Y)Z,U) - K(Z,R(X,Y)U); layout [l][z][u][i][j]
  std::vector<double> der(n4 * n);
  for (int l = 0; l < n; ++l)
    for (int z = 0; z < n; ++z)
      for (int u = 0; u < n; ++u)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) {
              s += d.curvature[idx4(n, l, q, i, j)] * K(q, z, u);
              s -= K(l, q, u) * d.curvature[idx4(n, q, z, i, j)];
              s -= K(l, z, q) * d.curvature[idx4(n, q, u, i, j)];
            }
            der[(((static_cast<size_t>(l) * n + z) * n + u) * n + i) * n + j] = s;
          }
  rep.derivation = h_norm(der, 1, 4, d.frame);

  rep.nabla_c = h_norm(d.nabla_c, 0, 4, d.frame);
  rep.c_norm = h_norm(d.C, d.frame);
  rep.parallel_residual = rep.c_norm > 1e-10 ? rep.nabla_c / rep.c_norm : rep.nabla_c;
  rep.parallel = rep.parallel_residual <= 1e-8;
  return rep;
}

// ----------------------------------------------------------------- grids

std::vector<std::vector<double>> grid_points(const ImmersionChart& chart, const GridSpec& grid) {
  if (grid.per_axis < 1) throw Error(ErrorCode::kInvalidInput, "grid needs at least one point per axis");
  const int n = chart.n;
  std::vector<std::vector<double>> axes(n);
  for (int i = 0; i < n; ++i) {
    const double lo = chart.domain[i].first, hi = chart.domain[i].second;
    const double a = lo + grid.margin * (hi - lo), b = hi - grid.margin * (hi - lo);
    if (grid.per_axis == 1) {
      axes[i].push_back(0.5 * (a + b));
      continue;
    }
    for (int t = 0; t < grid.per_axis; ++t)
      axes[i].push_back(a + (b - a) * t / (grid.per_axis - 1));
  }
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(n, 0);
  for (;;) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = axes[i][idx[i]];
    pts.push_back(std::move(p));
    int k = n - 1;
    while (k >= 0 && ++idx[k] == grid.per_axis) idx[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, std::max(1, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

VerifyReport verify_parallel_points(const ImmersionChart& chart,
                                    const std::vector<std::vector<double>>& points, double tol,
                                    int jobs) {
  const int count = static_cast<int>(points.size());
  std::vector<double> res(count, 0.0);
  std::vector<std::string> err(count);
  parallel_for(count, jobs, [&](int i) {
    try {
      res[i] = parallel_residual(invariants_at(chart, points[i]));
    } catch (const Error& e) {
      err[i] = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  });
  VerifyReport rep;
  rep.tol = tol;
  rep.points = count;
  int worst = -1;
  for (int i = 0; i < count; ++i) {
    if (!err[i].empty()) {
      rep.failures.push_back({points[i], err[i]});
      continue;
    }
    // strict comparison keeps the earliest (lexicographically smallest) point
    if (worst < 0 || res[i] > rep.max_residual) {
      rep.max_residual = res[i];
      worst = i;
    }
  }
  if (worst >= 0) rep.worst_point = points[worst];
  rep.pass = rep.failures.empty() && worst >= 0 && rep.max_residual <= tol;
  return rep;
}

VerifyReport verify_parallel(const ImmersionChart& chart, const GridSpec& grid, double tol, int jobs) {
  return verify_parallel_points(chart, grid_points(chart, grid), tol, jobs);
}

}  // namespace caffine
