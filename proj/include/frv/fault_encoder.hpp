#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frv/circuit.hpp"
#include "frv/logic.hpp"
#include "frv/simulator.hpp"

namespace frv {

enum class ControlLeaf : std::uint8_t { C, B1, B2 };

// Formula tree for one vulnerable gate instance:
//   |T| = 3: ite(c, ite(b1, ite(b2, s, r), bf), orig)
//   |T| = 2: ite(c, ite(b, t1, t2), orig), t1 < t2 in the order s < r < bf
//   |T| = 1: ite(c, t, orig)
// where each leaf applies the named gate function to the data inputs.
struct Gadget {
  struct Node {
    bool is_ite = false;
    GateKind fn = GateKind::Buf;       // leaf function
    ControlLeaf cond = ControlLeaf::C; // ite condition
    int then_node = -1, else_node = -1;
  };

  GateKind original = GateKind::Buf;
  FaultTypeSet types;
  std::vector<Node> nodes;
  int root = -1;

  size_t node_count() const { return nodes.size(); }
  // Cost in two-input cells, counting each ite as a 2:1 multiplexer built from
  // two and-gates, one or-gate and an inverter.
  size_t cell_count() const;

  bool evaluate(bool in1, bool in2, bool c, bool b1, bool b2) const;
};

// Throws InvalidModel for an empty type set.
Gadget build_gadget(GateKind kind, FaultTypeSet types);

struct ControlEntry {
  GateInstance instance;
  NodeId node = 0;
  GateKind original = GateKind::Buf;
  std::string c;                   // control variable name
  std::optional<std::string> b1;   // selection variables, |T| >= 2
  std::optional<std::string> b2;   // |T| = 3
};

// The unrolled circuit with every vulnerable instance behind a gadget. The
// base circuit is kept as is; gadgets are attached per node.
class ControlledCircuit {
 public:
  const UnrolledCircuit& base() const { return base_; }
  FaultTypeSet types() const { return types_; }
  const Gadget& gadget_for(GateKind kind) const;

  const std::vector<ControlEntry>& controls() const { return controls_; }
  // Indices into controls(), grouped by cycle (index 0 = cycle 1).
  const std::vector<std::vector<size_t>>& cycle_groups() const { return groups_; }
  std::optional<size_t> control_of(NodeId node) const;

  // Gate and register-read instances of the base circuit.
  size_t original_cells() const;
  // Same count after instrumentation, gadgets priced by cell_count().
  size_t instrumented_cells() const;

  friend ControlledCircuit instrument(const UnrolledCircuit& circuit, const std::vector<GateInstance>& locations,
                                      FaultTypeSet types);

 private:
  UnrolledCircuit base_;
  FaultTypeSet types_;
  std::map<GateKind, Gadget> gadgets_;
  std::vector<ControlEntry> controls_;
  std::vector<std::vector<size_t>> groups_;
  std::map<NodeId, size_t> by_node_;
};

// Throws UnknownInstance for a location the circuit does not have.
ControlledCircuit instrument(const UnrolledCircuit& circuit, const std::vector<GateInstance>& locations,
                             FaultTypeSet types);

using ControlAssignment = std::map<std::string, bool>;

// c-variables must all be present (IncompleteAssignment otherwise); selection
// bits are needed only where the decoding reads them.
FaultVector decode_fault_vector(const ControlAssignment& assignment, const ControlledCircuit& cc);

// c = 1 at the vector's instances with selection bits naming its type, every
// other variable 0. Throws UnknownInstance or InvalidModel when the vector
// does not fit the instrumentation.
ControlAssignment canonical_assignment(const FaultVector& v, const ControlledCircuit& cc);

// Simulates the instrumented circuit with the given control values.
Trace run_controlled(const ControlledCircuit& cc, const InputSequence& inputs, const ControlAssignment& assignment);

}  // namespace frv
