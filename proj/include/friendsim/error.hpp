#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace friendsim {

enum class ErrorCode {
    NotMonomial,
    Overflow,
    NonUnitInit,
    MissingInit,
    SystemMismatch,
    UnknownName,
    InvalidBasis,
    InvalidEvent,
    SpanError,
    ZeroCondition,
    NonMonomialDivision,
    RecorderNotReady,
    OutcomeMapIncomplete,
    OutcomeMapInvalid,
    ZeroProbabilityOutcome,
    NonMonomialNorm,
    TargetNotReady,
    RuleMissing,
    NonUnitRule,
    SyntaxError,
    SemanticError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the simulator carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Protocol text errors, positioned at 1-based line and column.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string &message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string &detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// A simulation error raised while executing a protocol step.
class StepError : public Error {
public:
    StepError(std::string step_id, const Error &cause);

    const std::string &step_id() const noexcept { return step_id_; }

private:
    std::string step_id_;
};

}  // namespace friendsim
