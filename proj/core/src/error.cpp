// Copyright 2026 The caffine Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "caffine/error.hpp"

namespace caffine {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::kInvalidParameters: return "InvalidParameters";
    case ErrorCode::kInvalidLambda: return "InvalidLambda";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kOrderExceeded: return "OrderExceeded";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kAsymmetryError: return "AsymmetryError";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateFrame: return "DegenerateFrame";
    case ErrorCode::kDegenerateMetric: return "DegenerateMetric";
    case ErrorCode::kCrossCheckFailure: return "CrossCheckFailure";
    case ErrorCode::kStructureInvalid: return "StructureInvalid";
    case ErrorCode::kZeroCubic: return "ZeroCubic";
    case ErrorCode::kBranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::kIsotropyViolation: return "IsotropyViolation";
    case ErrorCode::kSpectrumViolation: return "SpectrumViolation";
    case ErrorCode::kForbiddenP: return "ForbiddenP";
    case ErrorCode::kBlockMismatch: return "BlockMismatch";
  }
  return "Unknown";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError:
    case ErrorCode::kUnknownIdentifier:
    case ErrorCode::kInvalidParameters:
    case ErrorCode::kInvalidLambda:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kDomainError:
    case ErrorCode::kOrderExceeded:
      return 2;
    default:
      return 3;
  }
}

}  // namespace caffine
