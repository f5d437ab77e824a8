#include "frv/fault_encoder.hpp"

#include <algorithm>

namespace frv {

size_t Gadget::cell_count() const {
  size_t n = 0;
  for (const auto& node : nodes) n += node.is_ite ? 4 : 1;
  return n;
}

bool Gadget::evaluate(bool in1, bool in2, bool c, bool b1, bool b2) const {
  int at = root;
  for (;;) {
    const Node& n = nodes[at];
    if (!n.is_ite) return eval_bit(n.fn, in1, in2);
    bool sel = n.cond == ControlLeaf::C ? c : n.cond == ControlLeaf::B1 ? b1 : b2;
    at = sel ? n.then_node : n.else_node;
  }
}

Gadget build_gadget(GateKind kind, FaultTypeSet types) {
  if (types.empty()) throw Error(ErrorCode::InvalidModel, "gadget needs at least one fault type");
  Gadget g;
  g.original = kind;
  g.types = types;
  auto leaf = [&](GateKind fn) {
    g.nodes.push_back({false, fn, ControlLeaf::C, -1, -1});
    return static_cast<int>(g.nodes.size() - 1);
  };
  auto ite = [&](ControlLeaf cond, int t, int e) {
    g.nodes.push_back({true, GateKind::Buf, cond, t, e});
    return static_cast<int>(g.nodes.size() - 1);
  };

  auto ts = types.sorted();
  int faulty;
  if (ts.size() == 3) {
    int inner = ite(ControlLeaf::B2, leaf(apply_fault(kind, ts[0])), leaf(apply_fault(kind, ts[1])));
    faulty = ite(ControlLeaf::B1, inner, leaf(apply_fault(kind, ts[2])));
  } else if (ts.size() == 2) {
    faulty = ite(ControlLeaf::B1, leaf(apply_fault(kind, ts[0])), leaf(apply_fault(kind, ts[1])));
  } else {
    faulty = leaf(apply_fault(kind, ts[0]));
  }
  g.root = ite(ControlLeaf::C, faulty, leaf(kind));
  return g;
}

// ---------------------------------------------------------------------------

const Gadget& ControlledCircuit::gadget_for(GateKind kind) const { return gadgets_.at(kind); }

std::optional<size_t> ControlledCircuit::control_of(NodeId node) const {
  auto it = by_node_.find(node);
  if (it == by_node_.end()) return std::nullopt;
  return it->second;
}

size_t ControlledCircuit::original_cells() const {
  return std::count_if(base_.nodes().begin(), base_.nodes().end(),
                       [](const Node& n) { return n.role != NodeRole::Input; });
}

size_t ControlledCircuit::instrumented_cells() const {
  size_t n = original_cells();
  for (const auto& e : controls_) n += gadgets_.at(e.original).cell_count() - 1;
  return n;
}

ControlledCircuit instrument(const UnrolledCircuit& circuit, const std::vector<GateInstance>& locations,
                             FaultTypeSet types) {
  if (types.empty()) throw Error(ErrorCode::InvalidModel, "fault type set is empty");
  ControlledCircuit cc;
  cc.base_ = circuit;
  cc.types_ = types;
  cc.groups_.assign(circuit.k(), {});

  std::vector<GateInstance> sorted = locations;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  for (const auto& inst : sorted) {
    auto node = circuit.find_instance(inst);
    if (!node) throw Error(ErrorCode::UnknownInstance, "circuit has no instance to instrument");
    const std::string name = instance_name(circuit.frame(), inst);
    ControlEntry e{inst, *node, circuit.node(*node).fn, "c[" + name + "]", std::nullopt, std::nullopt};
    if (types.size() >= 2) e.b1 = "b1[" + name + "]";
    if (types.size() == 3) e.b2 = "b2[" + name + "]";
    if (!cc.gadgets_.count(e.original)) cc.gadgets_.emplace(e.original, build_gadget(e.original, types));
    cc.by_node_[*node] = cc.controls_.size();
    cc.groups_[inst.cycle - 1].push_back(cc.controls_.size());
    cc.controls_.push_back(std::move(e));
  }
  return cc;
}

FaultVector decode_fault_vector(const ControlAssignment& assignment, const ControlledCircuit& cc) {
  auto get = [&](const std::string& name) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw Error(ErrorCode::IncompleteAssignment, "no value for '" + name + "'");
    return it->second;
  };
  const auto ts = cc.types().sorted();
  std::vector<FaultEvent> events;
  for (const auto& e : cc.controls()) {
    if (!get(e.c)) continue;
    FaultType t = ts[0];
    if (ts.size() == 2) {
      t = get(*e.b1) ? ts[0] : ts[1];
    } else if (ts.size() == 3) {
      if (!get(*e.b1)) t = ts[2];
      else t = get(*e.b2) ? ts[0] : ts[1];
    }
    events.push_back({e.instance, t});
  }
  return FaultVector(std::move(events));
}

ControlAssignment canonical_assignment(const FaultVector& v, const ControlledCircuit& cc) {
  ControlAssignment a;
  for (const auto& e : cc.controls()) {
    a[e.c] = false;
    if (e.b1) a[*e.b1] = false;
    if (e.b2) a[*e.b2] = false;
  }
  const auto ts = cc.types().sorted();
  for (const auto& ev : v.events()) {
    auto node = cc.base().find_instance(ev.instance);
    auto idx = node ? cc.control_of(*node) : std::nullopt;
    if (!idx) throw Error(ErrorCode::UnknownInstance, "instance is not instrumented");
    if (!cc.types().contains(ev.type)) {
      throw Error(ErrorCode::InvalidModel, "fault type " + std::string(to_string(ev.type)) + " is not instrumented");
    }
    const auto& e = cc.controls()[*idx];
    a[e.c] = true;
    if (ts.size() == 2) {
      a[*e.b1] = ev.type == ts[0];
    } else if (ts.size() == 3) {
      a[*e.b1] = ev.type != ts[2];
      a[*e.b2] = ev.type == ts[0];
    }
  }
  return a;
}

Trace run_controlled(const ControlledCircuit& cc, const InputSequence& inputs, const ControlAssignment& assignment) {
  const UnrolledCircuit& c = cc.base();
  const SequentialCircuit& f = c.frame();
  if (static_cast<int>(inputs.size()) != c.k()) throw Error(ErrorCode::ShapeMismatch, "wrong number of cycles");
  auto get = [&](const std::optional<std::string>& name) {
    if (!name) return false;
    auto it = assignment.find(*name);
    if (it == assignment.end()) throw Error(ErrorCode::IncompleteAssignment, "no value for '" + *name + "'");
    return it->second;
  };

  std::vector<bool> val(c.nodes().size());
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& n = c.node(id);
    if (n.role == NodeRole::Input) {
      size_t idx = std::find(f.inputs().begin(), f.inputs().end(), n.net) - f.inputs().begin();
      if (inputs[n.cycle - 1].size() != f.inputs().size()) throw Error(ErrorCode::ShapeMismatch, "wrong input width");
      val[id] = inputs[n.cycle - 1][idx];
      continue;
    }
    bool a = n.arity > 0 && val[n.operands[0]];
    bool b = n.arity > 1 && val[n.operands[1]];
    if (auto ci = cc.control_of(id)) {
      const auto& e = cc.controls()[*ci];
      val[id] = cc.gadget_for(e.original).evaluate(a, b, get(e.c), get(e.b1), get(e.b2));
    } else {
      val[id] = eval_bit(n.fn, a, b);
    }
  }

  Trace trace(c.k());
  for (int cycle = 1; cycle <= c.k(); ++cycle) {
    CycleTrace& t = trace[cycle - 1];
    t.inputs = inputs[cycle - 1];
    for (size_t port : f.data_outputs()) t.outputs.push_back(val[c.output_node(port, cycle)]);
    if (auto fi = f.flag_index()) t.flag = val[c.output_node(*fi, cycle)];
    for (NetId r : f.registers()) t.state.push_back(val[c.node_of(f.net(r).next, cycle)]);
  }
  return trace;
}

}  // namespace frv
