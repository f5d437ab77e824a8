#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frv {

struct SourceLoc {
  int line = 0;
  int col = 0;

  bool valid() const { return line > 0; }
};

enum class ErrorCode {
  // netlist / config front end
  SyntaxError,
  UndefinedNet,
  DuplicateName,
  ArityMismatch,
  MissingOutputDriver,
  UnknownGateKind,
  InvalidModel,
  UnknownBlacklistGate,
  SchemaError,
  // circuit model
  CombinationalCycle,
  InvalidK,
  // simulation
  ShapeMismatch,
  UnknownInstance,
  DuplicateInstance,
  EmptyVector,
  TooLargeForExhaustive,
  // reductions / encoding
  NotApplicable,
  IncompleteAssignment,
  // solving
  BackendSpawnFailure,
  ModelParseError,
  InternalEncodingError,
  // oracle
  BudgetExceeded,
  TooManyVars,
  SolverUnknown,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the whole toolkit. The code is what callers
// branch on; the location is set for anything that came from source text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, SourceLoc loc = {});

  ErrorCode code() const { return code_; }
  const SourceLoc& loc() const { return loc_; }
  // Message without the code/location prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  SourceLoc loc_;
  std::string detail_;
};

}  // namespace frv
