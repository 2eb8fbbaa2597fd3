#include "marchenko/error.hpp"

namespace marchenko {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::BadR: return "BadR";
    case ErrorCode::NegativeMomentAtZero: return "NegativeMomentAtZero";
    case ErrorCode::OnSupport: return "OnSupport";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::MomentMismatch: return "MomentMismatch";
    case ErrorCode::InadmissibleSigma: return "InadmissibleSigma";
    case ErrorCode::HankelBreakdown: return "HankelBreakdown";
    case ErrorCode::AdmissibilityRequired: return "AdmissibilityRequired";
    case ErrorCode::FreeOperator: return "FreeOperator";
    case ErrorCode::TruncationBlowup: return "TruncationBlowup";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace marchenko
