// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Model hypersurfaces with parallel cubic form, as charts, with parameter
// validation and the label the classifier is expected to return.

#ifndef CAFFINE_CATALOG_HPP_
#define CAFFINE_CATALOG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "caffine/geometry.hpp"

namespace caffine {

ImmersionChart make_quadric(int n, int eps);
ImmersionChart make_power(const std::vector<double>& alphas);
ImmersionChart make_complex_power(int n, const std::vector<double>& alphas);
ImmersionChart make_log_canonical(int n, int v, const std::vector<double>& alphas);
ImmersionChart make_case_b(int n);
// branch 'a', 'b' or 'c'; eps is recovered from eps = lambda1 mu - mu^2.
ImmersionChart make_surface6(char branch, double lambda1, double mu, double a1);
ImmersionChart make_det_sym(int m);
ImmersionChart make_det_herm(int k);

// mu on the branch lambda1 > 2 mu for the given eps.
double surface6_mu(double lambda1, int eps);

// String-valued parameters as given on the command line ("alphas" -> "1,1,1").
using CatalogParams = std::map<std::string, std::string>;

struct CatalogEntry {
  std::string id;
  std::string schema;          // parameter names and constraints
  std::string defaults;        // example parameters, "key=value key=value"
  std::string expected_label;  // for the default parameters
  std::string reference;       // which family of the classification this realises
};

const std::vector<CatalogEntry>& catalog_entries();

// Builds the chart for id with params (missing keys fall back to defaults).
// Throws kUnknownIdentifier for an unknown id, kInvalidParameters otherwise.
ImmersionChart catalog_emit(const std::string& id, const CatalogParams& params = {});
std::string catalog_expected_label(const std::string& id, const CatalogParams& params = {});

struct CatalogSample {
  std::string id;
  CatalogParams params;
};
// Valid random parameter sets covering every entry; deterministic in seed.
std::vector<CatalogSample> sample_catalog(std::uint64_t seed, int per_entry);

// "1,2.5,-3" -> {1, 2.5, -3}; throws kInvalidParameters.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace caffine

#endif  // CAFFINE_CATALOG_HPP_
