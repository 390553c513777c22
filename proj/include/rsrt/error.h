// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_ERROR_H_
#define RSRT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsrt {

enum class ErrorKind {
  kIo,
  kUnsupportedFormat,
  kSampleRateMismatch,
  kInvariantViolation,
  kConfigMismatch,
  kEmptySignal,
  kDimensionMismatch,
  kRegionMismatch,
  kOverflow,
  kParse,
  kDuplicatePath,
  kEmptyClass,
  kAlreadySplit,
  kNotEnoughEligible,
  kInvalidArgument,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind),
        detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace rsrt

#endif  // RSRT_ERROR_H_
