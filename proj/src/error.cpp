#include "specround/error.hpp"

namespace specround {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DegenerateInstance: return "DegenerateInstance";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidCut: return "InvalidCut";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorKind::RangeCollapse: return "RangeCollapse";
    case ErrorKind::DegenerateCosts: return "DegenerateCosts";
    case ErrorKind::EmptySparsifier: return "EmptySparsifier";
    case ErrorKind::CertificateViolation: return "CertificateViolation";
    case ErrorKind::DisconnectedSupport: return "DisconnectedSupport";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorKind::UnluckyRun: return "UnluckyRun";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace specround
