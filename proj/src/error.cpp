#include "ssc/error.hpp"

#include "ssc/validation.hpp"

namespace ssc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kItemAlreadyAssigned: return "ItemAlreadyAssigned";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kTableMiss: return "TableMiss";
    case ErrorCode::kNotCoverable: return "NotCoverable";
    case ErrorCode::kEtaUnavailable: return "EtaUnavailable";
    case ErrorCode::kPolicyIncomplete: return "PolicyIncomplete";
    case ErrorCode::kNonCoveringPolicy: return "NonCoveringPolicy";
    case ErrorCode::kNoProgressPossible: return "NoProgressPossible";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kReferenceMismatch: return "ReferenceMismatch";
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNonPositiveCost: return "non_positive_cost";
    case ViolationKind::kProbabilityOutOfRange: return "probability_out_of_range";
    case ViolationKind::kProbabilitySum: return "probability_sum";
    case ViolationKind::kNormalization: return "normalization";
    case ViolationKind::kMonotonicity: return "monotonicity";
    case ViolationKind::kSubmodularity: return "submodularity";
    case ViolationKind::kSufficiency: return "sufficiency";
    case ViolationKind::kCoverability: return "coverability";
    case ViolationKind::kNonIntegerValue: return "non_integer_value";
    case ViolationKind::kUnverified: return "unverified";
  }
  return "unknown";
}

}  // namespace ssc
