#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssc {

enum class ErrorCode {
  kItemAlreadyAssigned,
  kBudgetExceeded,
  kTableMiss,
  kNotCoverable,
  kEtaUnavailable,
  kPolicyIncomplete,
  kNonCoveringPolicy,
  kNoProgressPossible,
  kDomainError,
  kGenerationFailed,
  kReferenceMismatch,
  kInvalidInstance,
  kParseError,
  kIoError,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; the C API maps `code()` to
// a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ssc
