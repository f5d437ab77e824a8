#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frv/cnf.hpp"
#include "frv/config.hpp"

namespace frv {

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  std::vector<bool> model;  // index 1..num_vars; index 0 unused
  std::string reason;       // for Unknown
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

// Conflict-driven clause learning over two watched literals, first-UIP
// learning, activity-ordered decisions with phase saving and Luby restarts.
// `conflict_limit` = 0 means unlimited; hitting it gives Unknown.
SatResult solve_builtin(const Cnf& cnf, std::uint64_t conflict_limit = 0, SolverStats* stats = nullptr);

// Runs `command` with the path of a temporary DIMACS file appended.
// Exit 10 = Sat with the model read from "v" lines, 20 = Unsat, anything
// else = Unknown. Throws BackendSpawnFailure or ModelParseError.
SatResult solve_external(const Cnf& cnf, const std::vector<std::string>& command);

SatResult solve_cnf(const Cnf& cnf, const SolverBackend& backend);

// Parses solver stdout "v ..." lines into a model of `num_vars` variables.
// Throws ModelParseError.
std::vector<bool> parse_model_lines(const std::string& text, int num_vars);

bool satisfies(const Cnf& cnf, const std::vector<bool>& model);

}  // namespace frv
