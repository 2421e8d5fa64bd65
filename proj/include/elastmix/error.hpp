#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elastmix {

/// Failure categories surfaced in machine-readable error records.
enum class ErrorCode {
  InvalidArgument,
  Unsupported,
  ParseError,
  NonConforming,
  InvertedCell,
  DegenerateCell,
  SingularConstruction,
  DimensionMismatch,
  FactorizationFailed,
  NotConverged,
  InsufficientModes,
  SizeLimit,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::NonConforming: return "non_conforming";
    case ErrorCode::InvertedCell: return "inverted_cell";
    case ErrorCode::DegenerateCell: return "degenerate_cell";
    case ErrorCode::SingularConstruction: return "singular_construction";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::FactorizationFailed: return "factorization_failed";
    case ErrorCode::NotConverged: return "not_converged";
    case ErrorCode::InsufficientModes: return "insufficient_modes";
    case ErrorCode::SizeLimit: return "size_limit";
    case ErrorCode::IoError: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace elastmix
