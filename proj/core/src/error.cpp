#include "digits/error.hpp"

namespace digits {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BlankImage: return "BlankImage";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyAllowedSet: return "EmptyAllowedSet";
    case ErrorCode::SameLabel: return "SameLabel";
    case ErrorCode::LabelOutsideGroup: return "LabelOutsideGroup";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace digits
