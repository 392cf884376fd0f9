#include "xdgdl/errors.hpp"

namespace xdgdl {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::NoDevices: return "NoDevices";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MissingFragment: return "MissingFragment";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnresolvedProcessors: return "UnresolvedProcessors";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptyDeviceList: return "EmptyDeviceList";
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::ManifestConflict: return "ManifestConflict";
    case ErrorCode::MissingManifest: return "MissingManifest";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::DeviceCountMismatch: return "DeviceCountMismatch";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace xdgdl
