#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frv/circuit.hpp"
#include "frv/cnf.hpp"
#include "frv/netlist.hpp"
#include "frv/simulator.hpp"

namespace frv {

struct OracleBudget {
  int max_input_bits = 16;
  std::uint64_t max_vectors = 1'000'000;
};

// Number of vectors enumerate_fault_vectors would yield, saturating at
// UINT64_MAX.
std::uint64_t count_fault_vectors(const SequentialCircuit& frame, const std::vector<GateInstance>& locations,
                                  const FaultResistanceModel& model);

// Calls `visit` for every admissible non-empty vector; returning false stops
// the enumeration. Locations are ordered by (cycle, name) and types s < r < bf,
// and vectors come out in lexicographic order of that ranking.
// Throws BudgetExceeded when the count exceeds budget.max_vectors.
void enumerate_fault_vectors(const SequentialCircuit& frame, const std::vector<GateInstance>& locations,
                             const FaultResistanceModel& model, const OracleBudget& budget,
                             const std::function<bool(const FaultVector&)>& visit);

struct OracleVerdict {
  bool resistant = true;
  std::optional<FaultVector> vector;
  std::optional<InputSequence> inputs;
  std::uint64_t vectors_checked = 0;
};

// Every admissible vector against every input sequence. Throws BudgetExceeded
// when either the input space or the vector count is over budget.
OracleVerdict brute_force_verdict(const UnrolledCircuit& circuit, const Blacklist& blacklist,
                                  const FaultResistanceModel& model, const OracleBudget& budget = {});

// All input sequences on which `v` is effective, in lexicographic order.
std::vector<InputSequence> effective_witnesses(const UnrolledCircuit& circuit, const FaultVector& v,
                                               const OracleBudget& budget = {});

struct GeneratedInstance {
  NetlistDoc netlist;
  Blacklist suggested_blacklist;
  std::optional<bool> expected_resistant;
  std::string provenance;
};

// Three-cycle reduction from satisfiability: 2 ne + 1 copies of phi feed a
// first register bank, which feeds a second bank; the flag is raised when
// 1 <= sum(first bank) <= ne or 1 <= sum(second bank) <= 2 ne. The instance
// is not resistant under ne events in one cycle on registers, B empty, iff
// phi is satisfiable. Throws TooManyVars above 8 variables.
GeneratedInstance np_hardness_instance(const Cnf& phi, int ne);

struct RandomParams {
  int max_gates = 15;
  int max_regs = 2;
  int num_inputs = 3;
  bool with_flag = true;
};

// Seed-deterministic, always valid. With a flag the detector is chosen per
// seed: duplicate-and-compare, a partial duplicate, or an unrelated net.
// The suggested blacklist holds the comparator gates.
GeneratedInstance random_netlist(std::uint64_t seed, const RandomParams& params = {});

}  // namespace frv
