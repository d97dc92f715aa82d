#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctedit {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  IoError,
  DimensionMismatch,
  InvalidArgument,
  MalformedTrees,
  SaddleNotFound,
  ScaleOutOfRange,
  ZeroPersistenceFeature,
  NoSelection,
  InvalidPairId,
  ScriptParseError,
  StepPreconditionFailed,
  RevisionMismatch,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI exit status, HTTP status) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctedit
