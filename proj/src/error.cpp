#include "frv/error.hpp"

namespace frv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndefinedNet: return "UndefinedNet";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MissingOutputDriver: return "MissingOutputDriver";
    case ErrorCode::UnknownGateKind: return "UnknownGateKind";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnknownBlacklistGate: return "UnknownBlacklistGate";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::CombinationalCycle: return "CombinationalCycle";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::DuplicateInstance: return "DuplicateInstance";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::TooLargeForExhaustive: return "TooLargeForExhaustive";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::BackendSpawnFailure: return "BackendSpawnFailure";
    case ErrorCode::ModelParseError: return "ModelParseError";
    case ErrorCode::InternalEncodingError: return "InternalEncodingError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TooManyVars: return "TooManyVars";
    case ErrorCode::SolverUnknown: return "SolverUnknown";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           SourceLoc loc) {
  std::string out(to_string(code));
  if (loc.valid()) {
    out += " at " + std::to_string(loc.line) + ":" + std::to_string(loc.col);
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, SourceLoc loc)
    : std::runtime_error(format_message(code, message, loc)),
      code_(code),
      loc_(loc),
      detail_(message) {}

}  // namespace frv
