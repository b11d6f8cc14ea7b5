#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fla {

enum class ErrorCode {
  InvalidArgument,
  UnknownAllele,
  LengthMismatch,
  CodeOutOfRange,
  SpaceTooLarge,
  EmptyInput,
  ConflictingDuplicate,
  NonFiniteFitness,
  NoPolymorphicLoci,
  StartNotFound,
  NotAnOptimum,
  DegenerateFit,
  NoNeighbors,
  SingleLocus,
  NoCompleteSquares,
  DegenerateVariance,
  InvalidK,
  FocalNotFound,
  MissingColumn,
  RaggedRow,
  NonNumericFitness,
  IoError,
  CorruptSnapshot,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownAllele: return "UnknownAllele";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::CodeOutOfRange: return "CodeOutOfRange";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConflictingDuplicate: return "ConflictingDuplicate";
    case ErrorCode::NonFiniteFitness: return "NonFiniteFitness";
    case ErrorCode::NoPolymorphicLoci: return "NoPolymorphicLoci";
    case ErrorCode::StartNotFound: return "StartNotFound";
    case ErrorCode::NotAnOptimum: return "NotAnOptimum";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::NoNeighbors: return "NoNeighbors";
    case ErrorCode::SingleLocus: return "SingleLocus";
    case ErrorCode::NoCompleteSquares: return "NoCompleteSquares";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::FocalNotFound: return "FocalNotFound";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::NonNumericFitness: return "NonNumericFitness";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
  }
  return "Unknown";
}

// All library failures are reported through this type; `code()` lets callers
// branch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fla
