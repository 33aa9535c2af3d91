// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/catalog.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "caffine/error.hpp"
#include "caffine/polynomial.hpp"

namespace caffine {

namespace {

std::string num(double v) {
  const std::string s = format_double17(v);
  return v < 0 ? "(" + s + ")" : s;
}

std::string var(int i) { return "u" + std::to_string(i + 1); }

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidParameters, what); }

std::vector<std::pair<double, double>> box(int n, double center, double half) {
  return std::vector<std::pair<double, double>>(n, {center - half, center + half});
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double17(v[i]);
  return s;
}

}  // namespace

ImmersionChart make_quadric(int n, int eps) {
  if (n < 1) invalid("quadric needs n >= 1");
  if (eps != 1 && eps != -1) invalid("eps must be +1 or -1");
  std::vector<std::string> comps;
  std::string sum;
  for (int i = 0; i < n; ++i) {
    comps.push_back(var(i));
    sum += " " + std::string(eps > 0 ? "-" : "+") + " " + var(i) + "^2";
  }
  comps.push_back("sqrt(1" + sum + ")");
  return make_chart(eps > 0 ? "sphere" : "hyperboloid", n, comps, box(n, 0.0, 0.5),
                    {{"eps", static_cast<double>(eps)}});
}

ImmersionChart make_power(const std::vector<double>& a) {
  if (a.size() < 2) invalid("power needs at least two exponents");
  const int n = static_cast<int>(a.size()) - 1;
  bool all_pos = true, mixed = a[0] < 0;
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += a[i];
    if (!(a[i] > 0)) all_pos = false;
    if (i > 0 && !(a[i] > 0)) mixed = false;
  }
  if (!all_pos) {
    if (!mixed) invalid("exponents must all be positive, or alpha_1 < 0 with the rest positive");
    if (!(sum < 0)) invalid("alpha_1 < 0 requires sum of alphas < 0, got " + format_double17(sum));
  }
  std::vector<std::string> comps;
  std::string last;
  for (int i = 0; i < n; ++i) {
    comps.push_back(var(i));
    last += (i ? "*" : "") + var(i) + "^" + num(-a[i] / a[n]);
  }
  comps.push_back(last);
  std::map<std::string, double> params;
  for (size_t i = 0; i < a.size(); ++i) params["alpha" + std::to_string(i + 1)] = a[i];
  return make_chart("power", n, comps, box(n, 1.0, 0.3), params);
}

ImmersionChart make_complex_power(int n, const std::vector<double>& a) {
  if (n < 1) invalid("complex power needs n >= 1");
  if (static_cast<int>(a.size()) != n + 1) invalid("complex power needs n+1 exponents");
  double sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    if (!(a[i] < 0)) invalid("alpha_" + std::to_string(i + 1) + " must be negative");
    sum += a[i];
  }
  if (!(2.0 * a[n - 1] + sum > 0)) invalid("need 2 alpha_n + sum_{i<n} alpha_i > 0");
  // x_n = r sin(theta), x_{n+1} = r cos(theta), theta = u_n
  std::string expo;
  for (int i = 0; i < n - 1; ++i) expo += num(a[i]) + "*ln(" + var(i) + ") + ";
  expo += num(a[n]) + "*" + var(n - 1);
  const std::string r = "exp(-(" + expo + ")/" + num(2.0 * a[n - 1]) + ")";
  std::vector<std::string> comps;
  for (int i = 0; i < n - 1; ++i) comps.push_back(var(i));
  comps.push_back(r + "*sin(" + var(n - 1) + ")");
  comps.push_back(r + "*cos(" + var(n - 1) + ")");
  auto dom = box(n, 1.0, 0.3);
  dom[n - 1] = {0.5, 1.1};
  std::map<std::string, double> params;
  for (size_t i = 0; i < a.size(); ++i) params["alpha" + std::to_string(i + 1)] = a[i];
  return make_chart("complex-power", n, comps, dom, params);
}

ImmersionChart make_log_canonical(int n, int v, const std::vector<double>& a) {
  if (n < 1) invalid("log-canonical needs n >= 1");
  if (v < 2 || v > n + 1) invalid("need 2 <= v <= n+1");
  if (static_cast<int>(a.size()) != n - v + 1) invalid("need exactly n - v + 1 exponents alpha_v..alpha_n");
  double sum = 0.0;
  for (double x : a) {
    if (!(x > 0)) invalid("alphas must be positive");
    sum += x;
  }
  if (!(sum < 1)) invalid("sum of alphas must be < 1, got " + format_double17(sum));
  std::string quad, logs = "-ln(u1)";
  for (int k = 2; k <= v - 1; ++k) quad += (quad.empty() ? "" : " + ") + var(k - 1) + "^2";
  for (int k = v; k <= n; ++k) logs += " + " + num(a[k - v]) + "*ln(" + var(k - 1) + ")";
  std::string last = "-u1*(" + logs + ")";
  if (!quad.empty()) last = "(" + quad + ")/(2*u1) " + last;
  std::vector<std::string> comps;
  auto dom = box(n, 1.0, 0.3);
  for (int k = 1; k <= n; ++k) {
    comps.push_back(var(k - 1));
    if (k >= 2 && k <= v - 1) dom[k - 1] = {-0.3, 0.3};
  }
  comps.push_back(last);
  std::map<std::string, double> params{{"v", static_cast<double>(v)}};
  for (int k = v; k <= n; ++k) params["alpha" + std::to_string(k)] = a[k - v];
  return make_chart("log-canonical", n, comps, dom, params);
}

ImmersionChart make_case_b(int n) {
  if (n < 2) invalid("case-b needs n >= 2");
  std::vector<std::string> comps{"exp(u1)"};
  std::string quad;
  for (int k = 2; k <= n; ++k) {
    comps.push_back(var(k - 1) + "*exp(u1)");
    quad += var(k - 1) + "^2 + ";
  }
  comps.push_back("(0.5*(" + quad + "0) + u1)*exp(u1)");
  return make_chart("case-b", n, comps, box(n, 0.0, 0.5));
}

double surface6_mu(double lambda1, int eps) {
  const double disc = lambda1 * lambda1 - 4.0 * eps;
  if (!(disc > 0)) invalid("need lambda1^2 - 4 eps > 0");
  return 0.5 * (lambda1 - std::sqrt(disc));
}

ImmersionChart make_surface6(char branch, double l1, double mu, double a1) {
  if (!(l1 > 0)) invalid("need lambda1 > 0");
  const double e = l1 * mu - mu * mu;
  const int eps = e > 0 ? 1 : -1;
  if (std::abs(e - eps) > 1e-9) invalid("need eps - lambda1 mu + mu^2 = 0 for eps = +-1, got lambda1 mu - mu^2 = " + format_double17(e));
  if (!(l1 * l1 - 4.0 * eps > 0)) invalid("need lambda1^2 - 4 eps > 0");
  if (!(l1 > 2.0 * mu)) invalid("need lambda1 > 2 mu");
  // lambda1 must be the maximum of f = lambda1 c^3 + 3 mu c s^2 + a1 s^3 on the circle
  for (int i = 1; i < 7200; ++i) {
    const double t = M_PI * i / 3600.0, c = std::cos(t), s = std::sin(t);
    if (l1 * c * c * c + 3.0 * mu * c * s * s + a1 * s * s * s > l1 * (1.0 + 1e-12))
      invalid("lambda1 is not the maximum of the cubic form; |a1| is too large");
  }
  const double disc = a1 * a1 + 4.0 * (mu * mu - eps);
  const std::string s1 = "exp(" + num(l1 - mu) + "*u1)";
  std::vector<std::string> comps;
  switch (branch) {
    case 'a': {
      if (!(disc > 1e-12)) invalid("branch a needs a1^2 + 4(mu^2 - eps) > 0, got " + format_double17(disc));
      const double s = std::sqrt(disc);
      comps = {s1, "exp(" + num(0.5 * (a1 + s)) + "*u2 + " + num(mu) + "*u1)",
               "exp(" + num(0.5 * (a1 - s)) + "*u2 + " + num(mu) + "*u1)"};
      break;
    }
    case 'b': {
      if (!(disc < -1e-12)) invalid("branch b needs a1^2 + 4(mu^2 - eps) < 0, got " + format_double17(disc));
      const double w = 0.5 * std::sqrt(-disc);
      const std::string g = "exp(" + num(0.5 * a1) + "*u2 + " + num(mu) + "*u1)";
      comps = {s1, "sin(" + num(w) + "*u2)*" + g, "cos(" + num(w) + "*u2)*" + g};
      break;
    }
    case 'c': {
      if (std::abs(disc) > 1e-9) invalid("branch c needs a1^2 + 4(mu^2 - eps) = 0, got " + format_double17(disc));
      if (eps != 1 || a1 == 0.0) invalid("branch c needs a1 != 0 and eps = 1");
      const std::string g = "exp(" + num(0.5 * a1) + "*u2 + " + num(mu) + "*u1)";
      comps = {g, s1, num(0.5 * a1) + "*u2*" + g};
      break;
    }
    default:
      invalid(std::string("unknown branch '") + branch + "'");
  }
  return make_chart(std::string("surface6-") + branch, 2, comps, box(2, 0.0, 0.5),
                    {{"lambda1", l1}, {"mu", mu}, {"a1", a1}, {"eps", static_cast<double>(eps)}});
}

namespace {

double det_half_width(int m) { return m <= 3 ? 0.3 : 0.6 / m; }

// Components for a matrix family: free variables then the solved last diagonal entry.
ImmersionChart det_chart(const std::string& name, int m, int nvars, const RealPolynomial& minor,
                         const RealPolynomial& rest, const std::vector<bool>& diagonal) {
  std::vector<std::string> comps;
  const double d = det_half_width(m);
  std::vector<std::pair<double, double>> dom;
  // coordinates are offsets from the identity, so the origin is the identity matrix
  for (int i = 0; i < nvars; ++i) {
    comps.push_back(diagonal[i] ? "1 + " + var(i) : var(i));
    dom.emplace_back(-d, d);
  }
  comps.push_back("(1 - (" + to_expr_text(rest) + "))/(" + to_expr_text(minor) + ")");
  return make_chart(name, nvars, comps, dom, {{"m", static_cast<double>(m)}});
}

}  // namespace

ImmersionChart make_det_sym(int m) {
  if (m < 3) invalid("det-sym needs m >= 3");
  const int nv = m * (m + 1) / 2 - 1;
  std::vector<std::vector<RealPolynomial>> a(m, std::vector<RealPolynomial>(m, RealPolynomial(nv)));
  std::vector<bool> diag;
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      if (i == m - 1 && j == m - 1) continue;
      a[i][j] = a[j][i] = RealPolynomial::variable(nv, k++);
      if (i == j) a[i][i] += RealPolynomial::constant(nv, 1.0);
      diag.push_back(i == j);
    }
  std::vector<std::vector<RealPolynomial>> top(m - 1);
  for (int i = 0; i < m - 1; ++i) top[i].assign(a[i].begin(), a[i].end() - 1);
  return det_chart("det-sym", m, nv, determinant(top), determinant(a), diag);
}

ImmersionChart make_det_herm(int k) {
  if (k < 3) invalid("det-herm needs k >= 3");
  const int nv = k * k - 1;
  using C = std::complex<double>;
  std::vector<std::vector<ComplexPolynomial>> a(k, std::vector<ComplexPolynomial>(k, ComplexPolynomial(nv)));
  std::vector<bool> diag;
  int v = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      if (i == j) {
        if (i == k - 1) continue;
        a[i][i] = ComplexPolynomial::variable(nv, v++) + ComplexPolynomial::constant(nv, 1.0);
        diag.push_back(true);
        continue;
      }
      const ComplexPolynomial re = ComplexPolynomial::variable(nv, v++);
      const ComplexPolynomial im = ComplexPolynomial::variable(nv, v++, C(0, 1));
      diag.push_back(false);
      diag.push_back(false);
      a[i][j] = re + im;
      a[j][i] = re - im;
    }
  std::vector<std::vector<ComplexPolynomial>> top(k - 1);
  for (int i = 0; i < k - 1; ++i) top[i].assign(a[i].begin(), a[i].end() - 1);
  return det_chart("det-herm", k, nv, real_part(determinant(top)), real_part(determinant(a)), diag);
}

// ------------------------------------------------------------------ entries

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      invalid("not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) invalid("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

namespace {

struct Params {
  const CatalogParams& given;
  CatalogParams defaults;

  const std::string& raw(const std::string& key) const {
    auto it = given.find(key);
    if (it != given.end()) return it->second;
    auto d = defaults.find(key);
    if (d == defaults.end()) invalid("missing parameter '" + key + "'");
    return d->second;
  }
  bool has(const std::string& key) const { return given.count(key) > 0; }
  double real(const std::string& key) const {
    const auto v = parse_number_list(raw(key));
    if (v.size() != 1) invalid("parameter '" + key + "' must be a single number");
    return v[0];
  }
  int integer(const std::string& key) const {
    const double v = real(key);
    if (v != std::floor(v) || std::abs(v) > 1e6) invalid("parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
  }
  std::vector<double> list(const std::string& key) const {
    const std::string& r = raw(key);
    return r.empty() ? std::vector<double>{} : parse_number_list(r);
  }
};

CatalogParams parse_defaults(const std::string& text) {
  CatalogParams out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    out[tok.substr(0, eq)] = eq == std::string::npos ? "" : tok.substr(eq + 1);
  }
  return out;
}

const CatalogEntry& find_entry(const std::string& id) {
  for (const auto& e : catalog_entries())
    if (e.id == id) return e;
  throw Error(ErrorCode::kUnknownIdentifier, "unknown catalog id '" + id + "'");
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"quadric", "n>=1 eps=+1|-1", "n=2 eps=1", "Quadric", "hyperquadric with vanishing cubic form"},
      {"power", "alphas=a1,...,a_{n+1}: all > 0, or a1 < 0 < a_i (i>=2) with sum < 0", "alphas=1,1,1",
       "CalabiPointFactor", "x1^a1 ... x_{n+1}^a_{n+1} = 1"},
      {"complex-power", "n>=1 alphas=a1,...,a_{n+1}: a_i < 0 (i<n), 2 a_n + sum_{i<n} a_i > 0",
       "n=2 alphas=-1,1,0.3", "CalabiPointFactor",
       "x1^a1 ... x_{n-1}^a_{n-1} (x_n^2+x_{n+1}^2)^a_n exp(a_{n+1} atan(x_n/x_{n+1})) = 1"},
      {"log-canonical", "n>=1 2<=v<=n+1 alphas=a_v,...,a_n > 0 with sum < 1", "n=2 v=2 alphas=0.5",
       "CalabiPointFactor", "x_{n+1} = (x_2^2+...+x_{v-1}^2)/(2 x1) - x1(-ln x1 + sum a_i ln x_i)"},
      {"case-b", "n>=2", "n=2", "CaseB", "x_{n+1} = (1/(2 x1)) sum x_k^2 + x1 ln x1, normalized exponential form"},
      {"surface6", "branch=a|b|c lambda1>0 mu (or eps=+1|-1) a1; eps = lambda1 mu - mu^2, lambda1 > 2 mu",
       "branch=a lambda1=3 eps=1 a1=2", "CalabiPointFactor", "flat surfaces solved in h-orthonormal coordinates"},
      {"det-sym", "m>=3", "m=3", "SL_R(3)", "SL(m,R)/SO(m) as det S = 1, S symmetric"},
      {"det-herm", "k>=3", "k=3", "SL_C(3)", "SL(k,C)/SU(k) as det H = 1, H Hermitian"},
  };
  return entries;
}

ImmersionChart catalog_emit(const std::string& id, const CatalogParams& given) {
  const CatalogEntry& e = find_entry(id);
  const CatalogParams defaults = parse_defaults(e.defaults);
  for (const auto& [key, value] : given) {
    if (!defaults.count(key) && !(id == "surface6" && key == "mu")) {
      invalid("unknown parameter '" + key + "' for " + id + " (expected " + e.schema + ")");
    }
  }
  Params p{given, defaults};
  // defaults of other shapes must not leak in when the user changes n
  if (id == "quadric") return make_quadric(p.integer("n"), p.integer("eps"));
  if (id == "power") return make_power(p.list("alphas"));
  if (id == "complex-power") return make_complex_power(p.integer("n"), p.list("alphas"));
  if (id == "log-canonical") {
    const int n = p.integer("n"), v = p.integer("v");
    if (!p.has("alphas") && (p.has("n") || p.has("v")) && v == n + 1) return make_log_canonical(n, v, {});
    return make_log_canonical(n, v, p.list("alphas"));
  }
  if (id == "case-b") return make_case_b(p.integer("n"));
  if (id == "surface6") {
    const std::string b = p.raw("branch");
    if (b.size() != 1) invalid("branch must be a, b or c");
    const double l1 = p.real("lambda1");
    double mu = 0.0;
    if (p.has("mu")) {
      mu = p.real("mu");
    } else {
      const int eps = p.integer("eps");
      if (eps != 1 && eps != -1) invalid("eps must be +1 or -1");
      mu = surface6_mu(l1, eps);
    }
    double a1 = 0.0;
    if (b == "c" && !p.has("a1")) {
      a1 = 2.0 * std::sqrt(std::max(0.0, 1.0 - mu * mu));
    } else {
      a1 = p.real("a1");
    }
    return make_surface6(b[0], l1, mu, a1);
  }
  if (id == "det-sym") return make_det_sym(p.integer("m"));
  return make_det_herm(p.integer("k"));
}

std::string catalog_expected_label(const std::string& id, const CatalogParams& given) {
  const CatalogEntry& e = find_entry(id);
  Params p{given, parse_defaults(e.defaults)};
  if (id == "det-sym") return "SL_R(" + std::to_string(p.integer("m")) + ")";
  if (id == "det-herm") return "SL_C(" + std::to_string(p.integer("k")) + ")";
  if (id == "log-canonical" && p.integer("v") == p.integer("n") + 1) return "CaseB";
  catalog_emit(id, given);  // validates the parameters
  if (id == "quadric" || id == "case-b" || id == "surface6") return e.expected_label;
  // the power-type families land in case C_1 at every dimension
  return "CalabiPointFactor";
}

std::vector<CatalogSample> sample_catalog(std::uint64_t seed, int per_entry) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<CatalogSample> out;
  for (int r = 0; r < per_entry; ++r) {
    {
      out.push_back({"quadric", {{"n", std::to_string(pick(1, 4))}, {"eps", pick(0, 1) ? "1" : "-1"}}});
    }
    {
      const int n = pick(2, 3);
      std::vector<double> a(n + 1);
      double rest = 0.0;
      for (int i = 1; i <= n; ++i) rest += (a[i] = uni(0.3, 2.0));
      a[0] = pick(0, 1) ? uni(0.3, 2.0) : -rest - uni(0.2, 1.5);
      out.push_back({"power", {{"alphas", join(a)}}});
    }
    {
      const int n = pick(2, 3);
      std::vector<double> a(n + 1);
      double sum = 0.0;
      for (int i = 0; i < n - 1; ++i) sum += (a[i] = -uni(0.2, 1.5));
      a[n - 1] = -0.5 * sum + uni(0.2, 1.0);
      a[n] = uni(-1.0, 1.0);
      out.push_back({"complex-power", {{"n", std::to_string(n)}, {"alphas", join(a)}}});
    }
    {
      const int n = pick(2, 3), v = pick(2, n + 1);
      std::vector<double> a(n - v + 1);
      for (double& x : a) x = uni(0.05, 0.9 / static_cast<double>(a.size()));
      out.push_back({"log-canonical", {{"n", std::to_string(n)}, {"v", std::to_string(v)}, {"alphas", join(a)}}});
    }
    {
      out.push_back({"case-b", {{"n", std::to_string(pick(2, 4))}}});
    }
    // surface6: draw until the parameters pass validation
    for (int tries = 0; tries < 1000; ++tries) {
      const int br = pick(0, 2);
      const int eps = br == 0 && pick(0, 1) ? -1 : 1;
      const double l1 = uni(2.2, 4.0);
      const double mu = surface6_mu(l1, eps);
      double a1 = 0.0;
      if (br == 0) {
        const double need = 4.0 * (eps - mu * mu);  // a1^2 must exceed this
        const double lo = need > 0 ? std::sqrt(need) + 0.05 : 0.0;
        a1 = uni(lo, lo + 1.0) * (pick(0, 1) ? 1 : -1);
      } else if (br == 1) {
        a1 = uni(-0.95, 0.95) * 2.0 * std::sqrt(1.0 - mu * mu);
      } else {
        a1 = (pick(0, 1) ? 1.0 : -1.0) * 2.0 * std::sqrt(1.0 - mu * mu);
      }
      CatalogSample s{"surface6",
                      {{"branch", std::string(1, "abc"[br])},
                       {"lambda1", format_double17(l1)},
                       {"mu", format_double17(mu)},
                       {"a1", format_double17(a1)}}};
      try {
        catalog_emit(s.id, s.params);
      } catch (const Error&) {
        continue;
      }
      out.push_back(s);
      break;
    }
  }
  out.push_back({"det-sym", {{"m", "3"}}});
  out.push_back({"det-herm", {{"k", "3"}}});
  return out;
}

}  // namespace caffine
