// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
// JSON views of the core result types, and a serializer that writes every
// floating point number with 17 significant digits.
#ifndef CAFFINE_CLI_REPORT_HPP_
#define CAFFINE_CLI_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "caffine/calabi.hpp"
#include "caffine/classify.hpp"
#include "caffine/error.hpp"
#include "caffine/geometry.hpp"
#include "json.hpp"

namespace caffine::cli {

using Json = nlohmann::ordered_json;

// Pretty printed, keys in insertion order, doubles as %.17g, NaN/inf as null.
std::string dump17(const Json& j);

Json vec_json(const std::vector<double>& v);
Json vec_json(const Vec& v);
Json mat_json(const Mat& m);

Json invariants_json(const CentroaffinePointData& data, const IntegrabilityReport& integ);
Json verify_json(const ImmersionChart& chart, const GridSpec& grid, const VerifyReport& rep);
Json classification_json(const ClassificationReport& rep);
Json calabi_structure_json(const CalabiStructure& s);
Json error_json(const std::string& code, const std::string& message, const std::string& location);

}  // namespace caffine::cli

#endif  // CAFFINE_CLI_REPORT_HPP_
