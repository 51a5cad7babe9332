#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ssc {

enum class ViolationKind {
  kNonPositiveCost,
  kProbabilityOutOfRange,
  kProbabilitySum,
  kNormalization,
  kMonotonicity,
  kSubmodularity,
  kSufficiency,
  kCoverability,
  kNonIntegerValue,
  kUnverified,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

using Violations = std::vector<Violation>;

}  // namespace ssc
