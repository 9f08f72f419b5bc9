#include "friendsim/error.hpp"

namespace friendsim {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotMonomial: return "NotMonomial";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonUnitInit: return "NonUnitInit";
    case ErrorCode::MissingInit: return "MissingInit";
    case ErrorCode::SystemMismatch: return "SystemMismatch";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::InvalidBasis: return "InvalidBasis";
    case ErrorCode::InvalidEvent: return "InvalidEvent";
    case ErrorCode::SpanError: return "SpanError";
    case ErrorCode::ZeroCondition: return "ZeroCondition";
    case ErrorCode::NonMonomialDivision: return "NonMonomialDivision";
    case ErrorCode::RecorderNotReady: return "RecorderNotReady";
    case ErrorCode::OutcomeMapIncomplete: return "OutcomeMapIncomplete";
    case ErrorCode::OutcomeMapInvalid: return "OutcomeMapInvalid";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::NonMonomialNorm: return "NonMonomialNorm";
    case ErrorCode::TargetNotReady: return "TargetNotReady";
    case ErrorCode::RuleMissing: return "RuleMissing";
    case ErrorCode::NonUnitRule: return "NonUnitRule";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    }
    return "Unknown";
}

ParseError::ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string &message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + std::string(error_code_name(code)) +
                      ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

StepError::StepError(std::string step_id, const Error &cause)
    : Error(cause.code(), "step " + step_id + ": " + cause.what()), step_id_(std::move(step_id)) {}

}  // namespace friendsim
