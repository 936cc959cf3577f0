#include "cdag/error.hpp"

namespace cdag {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::MultipleProducers: return "MultipleProducers";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::InconsistentEffort: return "InconsistentEffort";
    case ErrorCode::NotAComputeNode: return "NotAComputeNode";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::StaleGroup: return "StaleGroup";
    case ErrorCode::NotSplittable: return "NotSplittable";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::UnboundEntry: return "UnboundEntry";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::OffShell: return "OffShell";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::OverlappingAbsorbedSets: return "OverlappingAbsorbedSets";
    case ErrorCode::IncompleteDiagram: return "IncompleteDiagram";
    case ErrorCode::NearSingularPropagator: return "NearSingularPropagator";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::InvalidProcess: return "InvalidProcess";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoBreakEven: return "NoBreakEven";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

bool is_numeric(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NumericFailure:
    case ErrorCode::NearSingularPropagator:
    case ErrorCode::OffShell:
    case ErrorCode::BelowThreshold:
      return true;
    default:
      return false;
  }
}

}  // namespace cdag
