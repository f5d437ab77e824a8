#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frv/circuit.hpp"
#include "frv/logic.hpp"

namespace frv {

using Bits = std::vector<bool>;
using InputSequence = std::vector<Bits>;  // one vector per cycle, |inputs| bits each

struct FaultEvent {
  GateInstance instance;
  FaultType type = FaultType::BitFlip;

  bool operator==(const FaultEvent&) const = default;
};

// Set of fault events with pairwise-distinct instances, kept sorted by
// instance so equal sets compare equal.
class FaultVector {
 public:
  FaultVector() = default;
  explicit FaultVector(std::vector<FaultEvent> events);  // throws DuplicateInstance

  const std::vector<FaultEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  size_t size() const { return events_.size(); }

  int sharp_clk() const;  // number of distinct cycles
  int max_epc() const;    // max events in one cycle

  bool operator==(const FaultVector&) const = default;

 private:
  std::vector<FaultEvent> events_;
};

std::string describe(const SequentialCircuit& frame, const FaultVector& v);

struct CycleTrace {
  Bits inputs;
  Bits outputs;  // data outputs (flag excluded), declaration order
  bool flag = false;
  Bits state;    // register values at the end of the cycle
};

using Trace = std::vector<CycleTrace>;

// Throws ShapeMismatch when the input sequence does not match k x |inputs|.
Trace run_trace(const UnrolledCircuit& circuit, const InputSequence& inputs);

// Faulted copy: s/r turn the instance into a constant (dropping its incoming
// edges), bf replaces its function by the complement. Other instances and
// other cycles are untouched.
UnrolledCircuit apply_fault_vector(const UnrolledCircuit& circuit, const FaultVector& v);

struct EffectivenessResult {
  bool effective = false;
  std::optional<int> divergence_cycle;
  std::optional<std::string> differing_output;
};

// Effective iff some data output differs at a cycle i while the faulty flag
// is 0 at every cycle j <= i. Throws EmptyVector for v = {}.
EffectivenessResult check_effectiveness(const UnrolledCircuit& golden, const FaultVector& v,
                                        const InputSequence& inputs);

// Same, but data outputs of the protected circuit are compared against a
// separate reference circuit by output name.
EffectivenessResult check_effectiveness(const UnrolledCircuit& reference, const UnrolledCircuit& protected_circuit,
                                        const FaultVector& v, const InputSequence& inputs);

// Exhaustive search over all 2^(|inputs| k) sequences in lexicographic order
// (cycle 1 first, first declared input most significant).
// Throws TooLargeForExhaustive above 24 input bits.
std::optional<InputSequence> find_witness(const UnrolledCircuit& golden, const FaultVector& v);

std::string format_bits(const Bits& bits);
Bits parse_bits(std::string_view text);  // throws ShapeMismatch on non-binary text

// ---------------------------------------------------------------------------
// Bit-parallel evaluation, 64 input sequences per word. Used by the oracle.

struct NodeFault {
  NodeId node = 0;
  FaultType type = FaultType::BitFlip;
};

using InputWords = std::vector<std::vector<std::uint64_t>>;  // [cycle-1][input]

struct WordTrace {
  std::vector<std::vector<std::uint64_t>> outputs;  // [cycle-1][data output]
  std::vector<std::uint64_t> flag;                  // [cycle-1]
};

class WordSimulator {
 public:
  explicit WordSimulator(const UnrolledCircuit& circuit);

  // `faults` must be sorted by node id.
  void run(const InputWords& inputs, std::span<const NodeFault> faults, WordTrace& out);

 private:
  const UnrolledCircuit* circuit_;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint32_t> input_slot_;
};

// Lanes on which `faulty` is an effective deviation from `golden`.
std::uint64_t effective_lanes(const WordTrace& golden, const WordTrace& faulty);

// Node faults for a vector on this circuit, sorted; throws UnknownInstance.
std::vector<NodeFault> node_faults(const UnrolledCircuit& circuit, const FaultVector& v);

}  // namespace frv
