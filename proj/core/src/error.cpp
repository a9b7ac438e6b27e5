#include "flowlogic/error.hpp"

namespace flowlogic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SYNTAX";
    case ErrorCode::kInvalidNetwork: return "INVALID_NETWORK";
    case ErrorCode::kPrecondition: return "PRECONDITION";
    case ErrorCode::kNotClosed: return "NOT_CLOSED";
    case ErrorCode::kUnsupportedNesting: return "UNSUPPORTED_NESTING";
    case ErrorCode::kNotConjunctive: return "NOT_CONJUNCTIVE";
    case ErrorCode::kNotNormalForm: return "NOT_NORMAL_FORM";
    case ErrorCode::kNotExistentialBfl1: return "NOT_EBFL1";
    case ErrorCode::kUnboundTarget: return "UNBOUND_TARGET";
    case ErrorCode::kMalformed: return "MALFORMED";
    case ErrorCode::kBudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::kTooFewVariables: return "TOO_FEW_VARIABLES";
    case ErrorCode::kNotBalanced: return "NOT_BALANCED";
    case ErrorCode::kCyclicFullUnwind: return "CYCLIC_FULL_UNWIND";
    case ErrorCode::kNoPlaceholder: return "NO_PLACEHOLDER";
    case ErrorCode::kMultiplePlaceholders: return "MULTIPLE_PLACEHOLDERS";
    case ErrorCode::kEqualsPlaceholder: return "EQUALS_PLACEHOLDER";
    case ErrorCode::kApLimitExceeded: return "AP_LIMIT_EXCEEDED";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::kSyntax,
            "at position " + std::to_string(position) + ": " + message),
      position_(position) {}

}  // namespace flowlogic
