// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAFFINE_ERROR_HPP_
#define CAFFINE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace caffine {

enum class ErrorCode {
  // input problems
  kSyntaxError,
  kUnknownIdentifier,
  kInvalidParameters,
  kInvalidLambda,
  kInvalidInput,
  // evaluation / numerics
  kDomainError,
  kOrderExceeded,
  kNumericalFailure,
  kNonConvergence,
  kAsymmetryError,
  kRankDeficient,
  kDegenerateFrame,
  kDegenerateMetric,
  kCrossCheckFailure,
  // classification
  kStructureInvalid,
  kZeroCubic,
  kBranchAmbiguity,
  kIsotropyViolation,
  kSpectrumViolation,
  kForbiddenP,
  kBlockMismatch,
};

const char* error_code_name(ErrorCode code);

// Process exit code associated with an error: 2 for bad input, 3 for numerics.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {})
      : std::runtime_error(message), code_(code), location_(std::move(location)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace caffine

#endif  // CAFFINE_ERROR_HPP_
