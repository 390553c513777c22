// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/error.h"

namespace rsrt {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kConfigMismatch: return "ConfigMismatch";
    case ErrorKind::kEmptySignal: return "EmptySignal";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kRegionMismatch: return "RegionMismatch";
    case ErrorKind::kOverflow: return "OverflowError";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kDuplicatePath: return "DuplicatePath";
    case ErrorKind::kEmptyClass: return "EmptyClass";
    case ErrorKind::kAlreadySplit: return "AlreadySplit";
    case ErrorKind::kNotEnoughEligible: return "NotEnoughEligible";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace rsrt
