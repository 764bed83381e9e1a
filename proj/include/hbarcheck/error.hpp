#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hbarcheck {

enum class ErrorCode {
  InvalidArgument,
  NotSquare,
  NotSymmetric,
  NotHermitian,
  NoConvergence,
  NotPositiveDefinite,
  DimensionMismatch,
  ZeroModes,
  OddDimension,
  NotSPD,
  CrossCheckMismatch,
  NonPositiveWidth,
  NotAQuantumState,
  InvalidGrid,
  EdgeLeakage,
  NotNormalized,
  GridMismatch,
  InvalidEnsemble,
  MassDeficit,
  HermiticityViolation,
  PurityCrossCheckMismatch,
  PointOutOfBox,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroModes: return "ZeroModes";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
    case ErrorCode::NotAQuantumState: return "NotAQuantumState";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::EdgeLeakage: return "EdgeLeakage";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorCode::MassDeficit: return "MassDeficit";
    case ErrorCode::HermiticityViolation: return "HermiticityViolation";
    case ErrorCode::PurityCrossCheckMismatch: return "PurityCrossCheckMismatch";
    case ErrorCode::PointOutOfBox: return "PointOutOfBox";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code. All library failures
/// are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hbarcheck
