#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wristmood {

enum class ErrorCode {
  kMissingChannel,
  kMalformedHeader,
  kNonNumericSample,
  kBadAccRow,
  kMissingField,
  kLikertOutOfRange,
  kDuplicateEntry,
  kInvalidArgument,
  kSignalTooShort,
  kDegenerateSpectrum,
  kDegenerateDataset,
  kDimensionMismatch,
  kSingleClass,
  kNonFiniteFeature,
  kTooFewDays,
  kInternal,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `is_io()` separates environment
/// problems (missing files, unwritable paths) from invalid input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  bool is_io() const noexcept { return code_ == ErrorCode::kIo; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wristmood
