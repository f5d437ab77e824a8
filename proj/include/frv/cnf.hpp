#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "frv/formula.hpp"

namespace frv {

using Clause = std::vector<int>;

enum class CnfRole : std::uint8_t { PrimaryInput, Control, Selection, CycleActive, Tseitin, Cardinality };

std::string_view to_string(CnfRole role);

struct CnfVar {
  std::string name;  // empty for auxiliaries
  CnfRole role = CnfRole::Tseitin;
};

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<CnfVar> vars;  // vars[i] describes variable i + 1

  int new_var(CnfRole role, std::string name = {});
};

// Sequential counter: the clauses admit an extension iff at most k of
// `literals` are true. k = 0 gives one unit per literal, k >= n gives nothing.
// Auxiliaries are allocated in `cnf`.
std::vector<Clause> at_most_k(const std::vector<int>& literals, int k, Cnf& cnf);

struct TseitinResult {
  Cnf cnf;
  std::vector<int> var_index;  // formula var i -> CNF variable
};

// Equisatisfiable lowering of `root`. Formula variables come first, ordered by
// role (inputs, controls, selections, d) and then creation order; definition
// variables follow in node order.
TseitinResult tseitin_cnf(const Formula& f, Ref root);

// `p cnf V C` then one 0-terminated clause per line.
std::string emit_dimacs(const Cnf& cnf);
// JSON object mapping each named variable to {"index", "role"}.
std::string dimacs_sidecar(const Cnf& cnf);

// Throws SyntaxError on malformed input.
Cnf parse_dimacs(std::string_view text);

}  // namespace frv
