#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specround {

enum class ErrorKind {
  InvalidArgument,
  InvalidMatrix,
  NotPSD,
  DegenerateInstance,
  DimensionError,
  NumericalFailure,
  Disconnected,
  InvalidCut,
  NotIsotropic,
  IterationCapExceeded,
  RangeCollapse,
  DegenerateCosts,
  EmptySparsifier,
  CertificateViolation,
  DisconnectedSupport,
  Infeasible,
  BudgetTooSmall,
  UnluckyRun,
  InvalidParams,
  HypothesisViolation,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is the
/// machine-readable part; the message names the failing invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace specround
