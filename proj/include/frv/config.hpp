#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "frv/circuit.hpp"
#include "frv/logic.hpp"
#include "frv/netlist.hpp"

namespace frv {

struct ReductionFlags {
  bool fault_type = true;
  bool single_successor = true;
  bool single_exit = false;

  bool operator==(const ReductionFlags&) const = default;
};

// Empty command means the builtin solver.
struct SolverBackend {
  std::vector<std::string> command;

  bool builtin() const { return command.empty(); }
  bool operator==(const SolverBackend&) const = default;
};

struct VerificationConfig {
  int unroll_k = 1;
  FaultResistanceModel model;
  Blacklist blacklist;
  ReductionFlags reductions;
  SolverBackend solver;
  bool solver_given = false;  // "solver" present in the document
};

// JSON document:
//   {"k": 1,
//    "model": {"ne": 1, "nc": 1, "types": ["s","r","bf"], "location": "c"},
//    "blacklist": ["p1", ...],
//    "reductions": {"fault_type": true, "single_successor": true, "single_exit": false},
//    "solver": "builtin" | {"command": ["kissat", "-q"]}}
// "k" falls back to the netlist's .cycles, then 1. Only "model" is required.
VerificationConfig parse_config(std::string_view text, const NetlistDoc& doc);
VerificationConfig read_config_file(const std::string& path, const NetlistDoc& doc);

}  // namespace frv
