#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace digits {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  BlankImage,
  EmptyDataset,
  EmptyAllowedSet,
  SameLabel,
  LabelOutsideGroup,
  BadMagic,
  CountMismatch,
  TruncatedFile,
  MissingRoot,
  NoSamples,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace digits
