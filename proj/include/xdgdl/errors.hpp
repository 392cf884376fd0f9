#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xdgdl {

enum class ErrorCode {
  ParseError,
  ValidationError,
  InvalidDocument,
  ArithmeticOverflow,
  NoDevices,
  NotAPartition,
  SizeMismatch,
  MissingFragment,
  LengthMismatch,
  DimensionMismatch,
  UnresolvedProcessors,
  Unsupported,
  IoFailure,
  EmptyDeviceList,
  DuplicateTimestamp,
  ManifestConflict,
  MissingManifest,
  MissingKey,
  DeviceCountMismatch,
  UnknownKey,
  DuplicateKey,
  InvalidValue,
};

std::string_view error_code_name(ErrorCode code);

// Base of every error thrown by the library.  what() is prefixed with the
// code name so CLI diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace xdgdl
