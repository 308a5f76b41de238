#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sst {

// Machine-readable failure categories. The CLI reports these names verbatim.
enum class ErrorCode {
  kInvalidArgument,
  kEntryOutOfRange,
  kSkewViolation,
  kBadDiagonal,
  kNotSST,
  kNonTransitiveGrouping,
  kDegenerateScores,
  kNotConverged,
  kTooLarge,
  kTooManyBlocks,
  kUsageError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sst
