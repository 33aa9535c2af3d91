// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "caffine_cli/report.hpp"

#include <cmath>

namespace caffine::cli {
namespace {

void dump_rec(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string pad_in(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + Json(it.key()).dump() + ": ";
        dump_rec(it.value(), indent + 2, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // flat numeric arrays stay on one line
      bool scalar = true;
      for (const auto& e : j) scalar = scalar && !e.is_structured();
      if (scalar) {
        out += "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_rec(j[i], 0, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad_in;
        dump_rec(j[i], indent + 2, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double17(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

Json map_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

}  // namespace

std::string dump17(const Json& j) {
  std::string out;
  dump_rec(j, 0, out);
  out += "\n";
  return out;
}

Json vec_json(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json vec_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json mat_json(const Mat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

Json invariants_json(const CentroaffinePointData& d, const IntegrabilityReport& integ) {
  const int n = d.n;
  Json j;
  j["n"] = n;
  j["point"] = vec_json(d.point);
  j["epsilon"] = d.epsilon;
  j["signature"] = d.signature;
  j["convex"] = d.convex;
  Json h = Json::array();
  for (int a = 0; a < n; ++a) {
    Json row = Json::array();
    for (int b = 0; b < n; ++b) row.push_back(d.h(a, b));
    h.push_back(row);
  }
  j["h"] = h;
  // K[k][i][j] = K^k_ij
  Json K = Json::array();
  for (int k = 0; k < n; ++k) {
    Json slab = Json::array();
    for (int a = 0; a < n; ++a) {
      Json row = Json::array();
      for (int b = 0; b < n; ++b) row.push_back(d.K(k, a, b));
      slab.push_back(row);
    }
    K.push_back(slab);
  }
  j["K"] = K;
  Json C = Json::array();
  for (int a = 0; a < n; ++a) {
    Json slab = Json::array();
    for (int b = 0; b < n; ++b) {
      Json row = Json::array();
      for (int c = 0; c < n; ++c) row.push_back(d.C(a, b, c));
      slab.push_back(row);
    }
    C.push_back(slab);
  }
  j["C"] = C;
  j["tchebychev_form"] = vec_json(d.tcheb_form);
  j["tchebychev_vector"] = vec_json(d.tcheb_vector);
  j["traceless_cubic_norm"] = h_norm(d.traceless, d.frame);
  j["cubic_norm"] = integ.c_norm;
  j["nabla_c_norm"] = integ.nabla_c;
  j["parallel_residual"] = integ.parallel_residual;
  j["parallel"] = integ.parallel;
  j["residuals"] = {{"gauss", integ.gauss},
                    {"codazzi", integ.codazzi},
                    {"derivation", integ.derivation},
                    {"c_cross_check", d.c_cross_check},
                    {"metric_compat", d.metric_compat}};
  return j;
}

Json verify_json(const ImmersionChart& chart, const GridSpec& grid, const VerifyReport& rep) {
  Json j;
  j["chart"] = chart.name;
  j["n"] = chart.n;
  j["grid"] = grid.per_axis;
  j["points"] = rep.points;
  j["tol"] = rep.tol;
  j["max_residual"] = rep.max_residual;
  j["worst_point"] = vec_json(rep.worst_point);
  j["pass"] = rep.pass;
  Json f = Json::array();
  for (const auto& pf : rep.failures) f.push_back({{"point", vec_json(pf.point)}, {"message", pf.message}});
  j["failures"] = f;
  return j;
}

Json classification_json(const ClassificationReport& rep) {
  Json j;
  j["label"] = rep.label_text;
  j["n"] = rep.n;
  j["epsilon"] = rep.epsilon;
  j["lambda1"] = rep.lambda1;
  j["mu"] = rep.mu;
  j["eta"] = rep.eta;
  std::string tag = case_tag_name(rep.tag);
  if (rep.tag == CaseTag::kCm) tag += "(" + std::to_string(rep.m) + ")";
  j["case"] = tag;
  if (rep.k0) j["k0"] = *rep.k0;
  if (rep.p) j["p"] = *rep.p;
  j["trace_L_norm"] = rep.trace_L_norm;
  j["rho"] = rep.rho;
  j["residuals"] = map_json(rep.residuals);
  j["evidence"] = map_json(rep.evidence);
  if (!rep.diagnostic.empty()) j["diagnostic"] = rep.diagnostic;
  if (rep.spectrum) j["spectrum"] = vec_json(rep.spectrum->values);
  return j;
}

Json calabi_structure_json(const CalabiStructure& s) {
  Json j;
  j["T"] = vec_json(s.T);
  j["lambda1"] = s.lambda1;
  j["lambda2"] = s.lambda2;
  j["lambda3"] = s.lambda3;
  j["d2_dim"] = s.d2_dim;
  j["d3_dim"] = s.d3_dim;
  j["point_factor"] = s.point_factor;
  j["exact_form"] = s.exact_form;
  j["residual"] = s.residual;
  j["source"] = s.source;
  return j;
}

Json error_json(const std::string& code, const std::string& message, const std::string& location) {
  Json j;
  j["error"] = {{"code", code}, {"message", message}, {"location", location}};
  return j;
}

}  // namespace caffine::cli
