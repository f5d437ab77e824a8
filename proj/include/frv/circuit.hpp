#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "frv/logic.hpp"
#include "frv/netlist.hpp"

namespace frv {

using NetId = std::uint32_t;
using NodeId = std::uint32_t;

enum class NetKind : std::uint8_t { Input, Register, Gate };

struct Net {
  std::string name;
  NetKind kind = NetKind::Gate;
  GateKind gate = GateKind::Buf;    // meaningful for NetKind::Gate
  std::vector<NetId> operands;      // gate operands
  bool init = false;                // register initial value
  NetId next = 0;                   // register next-state driver
};

struct OutputPort {
  std::string name;
  NetId net = 0;
};

// One combinational frame plus registers; every clock cycle runs the same
// frame. Net ids are dense: inputs first, then registers, then gates in
// declaration order.
class SequentialCircuit {
 public:
  const std::string& name() const { return name_; }
  const std::vector<Net>& nets() const { return nets_; }
  const Net& net(NetId id) const { return nets_[id]; }
  std::optional<NetId> find(std::string_view name) const;
  NetId id_of(std::string_view name) const;  // throws UndefinedNet

  const std::vector<NetId>& inputs() const { return inputs_; }
  const std::vector<NetId>& registers() const { return registers_; }
  const std::vector<NetId>& gates() const { return gates_; }
  const std::vector<NetId>& topo_order() const { return topo_; }

  const std::vector<OutputPort>& outputs() const { return outputs_; }
  std::optional<size_t> flag_index() const { return flag_index_; }
  // Outputs other than the error flag, in declaration order.
  const std::vector<size_t>& data_outputs() const { return data_outputs_; }

  // Consumers of a net inside one frame.
  struct Fanout {
    std::vector<NetId> gates;          // distinct consuming gates
    std::vector<size_t> output_ports;  // output port indices
    std::vector<NetId> registers;      // registers whose next-state is this net
    size_t edge_count = 0;
  };
  const Fanout& fanout(NetId id) const { return fanout_[id]; }

  std::optional<int> default_cycles() const { return default_cycles_; }

  friend SequentialCircuit build_and_validate(const NetlistDoc& doc);

 private:
  std::string name_;
  std::vector<Net> nets_;
  std::unordered_map<std::string, NetId> by_name_;
  std::vector<NetId> inputs_, registers_, gates_, topo_;
  std::vector<OutputPort> outputs_;
  std::optional<size_t> flag_index_;
  std::vector<size_t> data_outputs_;
  std::vector<Fanout> fanout_;
  std::optional<int> default_cycles_;
};

// Checks the frame is a DAG with correct fan-in and computes a topological
// order. Throws CombinationalCycle (message lists the cycle) or ArityMismatch.
SequentialCircuit build_and_validate(const NetlistDoc& doc);

// ---------------------------------------------------------------------------
// Unrolled circuits.

enum class InstanceKind : std::uint8_t { Logic, Register };

// A gate or register at a given cycle. For registers the instance is the value
// consumed during `cycle`, i.e. the state produced by cycle - 1.
struct GateInstance {
  int cycle = 1;
  NetId net = 0;
  InstanceKind kind = InstanceKind::Logic;

  auto operator<=>(const GateInstance&) const = default;
};

enum class NodeRole : std::uint8_t { Input, RegisterRead, Gate };

struct Node {
  GateKind fn = GateKind::Buf;
  std::uint8_t arity = 0;
  std::array<NodeId, 2> operands{0, 0};
  NodeRole role = NodeRole::Gate;
  NetId net = 0;
  int cycle = 1;
};

// k copies of the frame chained through the registers. Nodes are stored in a
// topological order, so one forward pass evaluates the circuit.
//
// A register read at cycle 1 is a constant node holding the init bit; at
// cycle s > 1 it is a buffer of the next-state driver at cycle s - 1. Faults
// on registers therefore act on the read path inside the cycle.
class UnrolledCircuit {
 public:
  const SequentialCircuit& frame() const { return *frame_; }
  std::shared_ptr<const SequentialCircuit> frame_ptr() const { return frame_; }
  int k() const { return k_; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[id]; }

  // Node computing `net` during `cycle` (1-based).
  NodeId node_of(NetId net, int cycle) const { return net_nodes_[(cycle - 1) * frame_->nets().size() + net]; }
  NodeId input_node(size_t input_index, int cycle) const {
    return node_of(frame_->inputs()[input_index], cycle);
  }
  NodeId output_node(size_t port, int cycle) const {
    return node_of(frame_->outputs()[port].net, cycle);
  }

  std::optional<NodeId> find_instance(const GateInstance& inst) const;
  std::vector<GateInstance> instances() const;  // every logic and register instance
  size_t logic_instance_count() const { return static_cast<size_t>(k_) * frame_->gates().size(); }

  // Replaces one node's function. Used to build faulted copies.
  void set_function(NodeId id, GateKind fn, bool drop_operands);

  friend UnrolledCircuit unroll(std::shared_ptr<const SequentialCircuit> circuit, int k);

 private:
  std::shared_ptr<const SequentialCircuit> frame_;
  int k_ = 0;
  std::vector<Node> nodes_;
  std::vector<NodeId> net_nodes_;
};

// Throws InvalidK when k < 1.
UnrolledCircuit unroll(std::shared_ptr<const SequentialCircuit> circuit, int k);
UnrolledCircuit unroll(const SequentialCircuit& circuit, int k);

// Canonical external name: "<net>@<cycle>".
std::string instance_name(const SequentialCircuit& frame, const GateInstance& inst);
// Parses "<net>@<cycle>"; throws UnknownInstance.
GateInstance parse_instance(const SequentialCircuit& frame, std::string_view text);

using Blacklist = std::set<std::string>;

// Throws UnknownBlacklistGate unless every name is a gate or register.
void validate_blacklist(const SequentialCircuit& frame, const Blacklist& blacklist);

// All fault-injectable instances: complement of B_l over cycles 1..k. Sorted.
std::vector<GateInstance> fault_locations(const UnrolledCircuit& unrolled, const Blacklist& blacklist,
                                          Location location);

}  // namespace frv
