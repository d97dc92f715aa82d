#include "ctedit/errors.hpp"

namespace ctedit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedTrees: return "MalformedTrees";
    case ErrorCode::SaddleNotFound: return "SaddleNotFound";
    case ErrorCode::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorCode::ZeroPersistenceFeature: return "ZeroPersistenceFeature";
    case ErrorCode::NoSelection: return "NoSelection";
    case ErrorCode::InvalidPairId: return "InvalidPairId";
    case ErrorCode::ScriptParseError: return "ScriptParseError";
    case ErrorCode::StepPreconditionFailed: return "StepPreconditionFailed";
    case ErrorCode::RevisionMismatch: return "RevisionMismatch";
  }
  return "Unknown";
}

}  // namespace ctedit
