// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <sstream>

#include "caffine/error.hpp"
#include "caffine/geometry.hpp"
#include "json.hpp"

namespace caffine {

std::string format_double17(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e308" : "-1e308";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

ImmersionChart chart_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed chart JSON: ") + e.what(),
                "byte " + std::to_string(e.byte));
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key))
      throw Error(ErrorCode::kInvalidInput, std::string("chart JSON lacks \"") + key + "\"", key);
    return j.at(key);
  };
  try {
    const std::string name = j.is_object() && j.contains("name") ? j.at("name").get<std::string>() : "";
    const int n = need("n").get<int>();
    const auto comps = need("components").get<std::vector<std::string>>();
    std::vector<std::pair<double, double>> domain;
    for (const auto& iv : need("domain")) {
      if (!iv.is_array() || iv.size() != 2)
        throw Error(ErrorCode::kInvalidInput, "domain entries must be [lo, hi]", "domain");
      domain.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    }
    std::map<std::string, double> params;
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) params[k] = v.get<double>();
    return make_chart(name, n, comps, std::move(domain), std::move(params));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("chart JSON has wrong types: ") + e.what());
  }
}

std::string chart_to_json(const ImmersionChart& chart) {
  std::ostringstream os;
  os << "{\"name\": " << quote(chart.name) << ", \"n\": " << chart.n << ", \"components\": [";
  for (size_t i = 0; i < chart.components.size(); ++i)
    os << (i ? ", " : "") << quote(chart.components[i].to_string());
  os << "], \"domain\": [";
  for (size_t i = 0; i < chart.domain.size(); ++i)
    os << (i ? ", " : "") << "[" << format_double17(chart.domain[i].first) << ", "
       << format_double17(chart.domain[i].second) << "]";
  os << "], \"params\": {";
  bool first = true;
  for (const auto& [k, v] : chart.params) {
    os << (first ? "" : ", ") << quote(k) << ": " << format_double17(v);
    first = false;
  }
  os << "}}";
  return os.str();
}

}  // namespace caffine
