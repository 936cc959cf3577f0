#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdag {

enum class ErrorCode {
  // graph structure
  UnknownNode,
  KindViolation,
  DuplicateEdge,
  MultipleProducers,
  CycleDetected,
  InconsistentEffort,
  NotAComputeNode,
  ValidationFailed,
  // graph operations
  StaleGroup,
  NotSplittable,
  SignatureMismatch,
  // lowering / execution
  InvalidSchedule,
  UnboundEntry,
  UnknownKernel,
  KernelMismatch,
  NumericFailure,
  // models
  OffShell,
  KindMismatch,
  OverlappingAbsorbedSets,
  IncompleteDiagram,
  NearSingularPropagator,
  BelowThreshold,
  InvalidProcess,
  BadDimensions,
  OutOfBounds,
  DimensionMismatch,
  // analysis
  NoBreakEven,
  // front end
  Parse,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numeric failures are the kernel-side errors a CLI reports with exit code 3.
bool is_numeric(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdag
