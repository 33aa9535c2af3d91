// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
// Command line front end. parse_args fills a RunConfig, run executes it and
// returns the process exit code:
//   0 success, 1 verification or classification mismatch,
//   2 invalid input or configuration, 3 numerical failure.
#ifndef CAFFINE_CLI_CLI_HPP_
#define CAFFINE_CLI_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "caffine/catalog.hpp"

namespace caffine::cli {

struct RunConfig {
  std::string command;  // invariants, verify, classify, calabi-compose, calabi-decompose,
                        // catalog-list, catalog-emit
  std::string chart;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::vector<double>> point;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0: hardware concurrency
  std::string output;  // empty: standard output
  // classify
  std::string expect;
  // calabi-compose
  std::string spec;
  std::string left;
  std::string right;
  std::optional<double> lambda;
  std::optional<std::vector<double>> factor_point;
  // calabi-decompose
  std::optional<int> u_index;
  // catalog-emit
  std::string catalog_id;
  CatalogParams catalog_params;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = 0;  // meaningful when config is empty (help or error)
};

// Accepts "catalog list|emit" and "calabi compose|decompose" as aliases of the
// hyphenated commands. The default seed comes from CAFFINE_SEED when set.
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace caffine::cli

#endif  // CAFFINE_CLI_CLI_HPP_
