#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowlogic {

enum class ErrorCode {
  kSyntax,
  kInvalidNetwork,
  kPrecondition,
  kNotClosed,
  kUnsupportedNesting,
  kNotConjunctive,
  kNotNormalForm,
  kNotExistentialBfl1,
  kUnboundTarget,
  kMalformed,
  kBudgetExceeded,
  kTooFewVariables,
  kNotBalanced,
  kCyclicFullUnwind,
  kNoPlaceholder,
  kMultiplePlaceholders,
  kEqualsPlaceholder,
  kApLimitExceeded,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; outcomes such as an
// infeasible flow or an unsatisfied formula are values, not errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A syntax error with the byte offset where it was detected.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace flowlogic
