#include "wristmood/error.hpp"

namespace wristmood {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingChannel: return "MissingChannel";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kNonNumericSample: return "NonNumericSample";
    case ErrorCode::kBadAccRow: return "BadAccRow";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kLikertOutOfRange: return "LikertOutOfRange";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kDegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::kDegenerateDataset: return "DegenerateDataset";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::kTooFewDays: return "TooFewDays";
    case ErrorCode::kInternal: return "Internal";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace wristmood
