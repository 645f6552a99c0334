#pragma once

#include <stdexcept>
#include <string>

namespace panda {

enum class ErrorCode {
  kParseError,
  kDuplicateAtomVarSet,
  kHeadVarNotInBody,
  kUnknownRelation,
  kNonGuardedConstraint,
  kUnguardedDegree,
  kSchemaMismatch,
  kEmptyInput,
  kUniverseTooLarge,
  kUnbounded,
  kInfeasible,
  kPreconditionViolated,
  kInvalidWitness,
  kUnguardedConstraint,
  kConstraintViolated,
  kNoApplicableCase,
  kEmptyOutputSet,
  kNonTerminalLeaf,
  kNotFreeConnex,
  kMissingFile,
  kHeaderMismatch,
  kOracleCapExceeded,
  kUsage,
};

const char* error_code_name(ErrorCode code);

class PandaError : public std::runtime_error {
 public:
  PandaError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public PandaError {
 public:
  ParseError(const std::string& message, int line, int column)
      : PandaError(ErrorCode::kParseError,
                   std::to_string(line) + ":" + std::to_string(column) + ": " +
                       message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw PandaError(code, message);
}

}  // namespace panda
