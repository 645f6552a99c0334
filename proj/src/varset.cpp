#include "panda/varset.hpp"

#include <stdexcept>

#include "panda/errors.hpp"
#include "panda/rational.hpp"

namespace panda {

Universe::Universe(std::vector<std::string> names) {
  for (auto& n : names) intern(n);
}

int Universe::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return -1;
}

int Universe::intern(const std::string& name) {
  int idx = index_of(name);
  if (idx >= 0) return idx;
  if (size() >= kMaxVariables) {
    fail(ErrorCode::kUniverseTooLarge,
         "more than " + std::to_string(kMaxVariables) + " variables");
  }
  names_.push_back(name);
  return size() - 1;
}

std::string Universe::format(VarSet s) const {
  std::string out;
  for (int v : s.members()) {
    if (!out.empty()) out += ',';
    out += v < size() ? names_[v] : "#" + std::to_string(v);
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  Rational r;
  if (r.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
  r.canonicalize();
  return r;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateAtomVarSet: return "DuplicateAtomVarSet";
    case ErrorCode::kHeadVarNotInBody: return "HeadVarNotInBody";
    case ErrorCode::kUnknownRelation: return "UnknownRelation";
    case ErrorCode::kNonGuardedConstraint: return "NonGuardedConstraint";
    case ErrorCode::kUnguardedDegree: return "UnguardedDegree";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUniverseTooLarge: return "UniverseTooLarge";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kInvalidWitness: return "InvalidWitness";
    case ErrorCode::kUnguardedConstraint: return "UnguardedConstraint";
    case ErrorCode::kConstraintViolated: return "ConstraintViolated";
    case ErrorCode::kNoApplicableCase: return "NoApplicableCase";
    case ErrorCode::kEmptyOutputSet: return "EmptyOutputSet";
    case ErrorCode::kNonTerminalLeaf: return "NonTerminalLeaf";
    case ErrorCode::kNotFreeConnex: return "NotFreeConnex";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kOracleCapExceeded: return "OracleCapExceeded";
    case ErrorCode::kUsage: return "Usage";
  }
  return "Unknown";
}

}  // namespace panda
