#include "frv/circuit.hpp"

#include <algorithm>
#include <charconv>

namespace frv {

std::optional<NetId> SequentialCircuit::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NetId SequentialCircuit::id_of(std::string_view name) const {
  auto id = find(name);
  if (!id) throw Error(ErrorCode::UndefinedNet, "undefined net '" + std::string(name) + "'");
  return *id;
}

namespace {

// Iterative DFS; on a back edge the current stack holds the cycle.
std::vector<NetId> topo_sort(const std::vector<Net>& nets, const std::vector<NetId>& gates,
                             std::vector<NetId>* cycle) {
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(nets.size(), White);
  std::vector<NetId> order;
  order.reserve(gates.size());
  for (NetId root : gates) {
    if (color[root] != White) continue;
    std::vector<std::pair<NetId, size_t>> stack{{root, 0}};
    color[root] = Grey;
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      const Net& n = nets[id];
      if (n.kind == NetKind::Gate && next < n.operands.size()) {
        NetId op = n.operands[next++];
        if (nets[op].kind != NetKind::Gate) continue;
        if (color[op] == Grey) {
          auto from = std::find_if(stack.begin(), stack.end(), [&](auto& e) { return e.first == op; });
          for (auto it = from; it != stack.end(); ++it) cycle->push_back(it->first);
          return {};
        }
        if (color[op] == White) {
          color[op] = Grey;
          stack.push_back({op, 0});
        }
        continue;
      }
      color[id] = Black;
      order.push_back(id);
      stack.pop_back();
    }
  }
  return order;
}

}  // namespace

SequentialCircuit build_and_validate(const NetlistDoc& doc) {
  SequentialCircuit c;
  c.name_ = doc.name;
  c.default_cycles_ = doc.default_cycles;

  auto add = [&](Net n, SourceLoc loc) {
    NetId id = static_cast<NetId>(c.nets_.size());
    if (!c.by_name_.emplace(n.name, id).second) {
      throw Error(ErrorCode::DuplicateName, "name '" + n.name + "' declared more than once", loc);
    }
    c.nets_.push_back(std::move(n));
    return id;
  };
  for (const auto& i : doc.inputs) {
    Net n;
    n.name = i;
    n.kind = NetKind::Input;
    c.inputs_.push_back(add(std::move(n), {}));
  }
  for (const auto& r : doc.registers) {
    Net n;
    n.name = r.name;
    n.kind = NetKind::Register;
    n.init = r.init;
    c.registers_.push_back(add(std::move(n), r.loc));
  }
  for (const auto& g : doc.gates) {
    if (static_cast<int>(g.operands.size()) != arity(g.kind)) {
      throw Error(ErrorCode::ArityMismatch,
                  "gate '" + g.name + "' of kind " + std::string(to_string(g.kind)) + " takes " +
                      std::to_string(arity(g.kind)) + " operand(s), got " + std::to_string(g.operands.size()),
                  g.loc);
    }
    Net n;
    n.name = g.name;
    n.gate = g.kind;
    c.gates_.push_back(add(std::move(n), g.loc));
  }
  for (size_t i = 0; i < doc.gates.size(); ++i) {
    Net& n = c.nets_[c.gates_[i]];
    for (const auto& op : doc.gates[i].operands) {
      auto id = c.find(op);
      if (!id) throw Error(ErrorCode::UndefinedNet, "undefined net '" + op + "'", doc.gates[i].loc);
      n.operands.push_back(*id);
    }
  }
  for (size_t i = 0; i < doc.registers.size(); ++i) {
    const auto& r = doc.registers[i];
    auto it = doc.next_state.find(r.name);
    if (it == doc.next_state.end()) {
      throw Error(ErrorCode::MissingOutputDriver, "register '" + r.name + "' has no next-state driver", r.loc);
    }
    c.nets_[c.registers_[i]].next = c.id_of(it->second);
  }
  for (const auto& o : doc.outputs) {
    auto id = c.find(o);
    if (!id) throw Error(ErrorCode::MissingOutputDriver, "output '" + o + "' has no driver");
    if (doc.flag_output && *doc.flag_output == o) c.flag_index_ = c.outputs_.size();
    else c.data_outputs_.push_back(c.outputs_.size());
    c.outputs_.push_back({o, *id});
  }
  if (doc.flag_output && !c.flag_index_) {
    throw Error(ErrorCode::MissingOutputDriver, "flag '" + *doc.flag_output + "' is not an output");
  }

  std::vector<NetId> cycle;
  c.topo_ = topo_sort(c.nets_, c.gates_, &cycle);
  if (!cycle.empty()) {
    std::string path;
    for (NetId id : cycle) path += (path.empty() ? "" : " -> ") + c.nets_[id].name;
    path += " -> " + c.nets_[cycle.front()].name;
    const GateDecl* g = doc.find_gate(c.nets_[cycle.front()].name);
    throw Error(ErrorCode::CombinationalCycle, "combinational cycle: " + path, g ? g->loc : SourceLoc{});
  }

  c.fanout_.resize(c.nets_.size());
  for (NetId g : c.gates_) {
    for (NetId op : c.nets_[g].operands) {
      auto& f = c.fanout_[op];
      ++f.edge_count;
      if (std::find(f.gates.begin(), f.gates.end(), g) == f.gates.end()) f.gates.push_back(g);
    }
  }
  for (size_t p = 0; p < c.outputs_.size(); ++p) {
    auto& f = c.fanout_[c.outputs_[p].net];
    ++f.edge_count;
    f.output_ports.push_back(p);
  }
  for (NetId r : c.registers_) {
    auto& f = c.fanout_[c.nets_[r].next];
    ++f.edge_count;
    f.registers.push_back(r);
  }
  return c;
}

// ---------------------------------------------------------------------------

UnrolledCircuit unroll(std::shared_ptr<const SequentialCircuit> circuit, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidK, "cycle count must be >= 1, got " + std::to_string(k));
  UnrolledCircuit u;
  u.frame_ = std::move(circuit);
  u.k_ = k;
  const SequentialCircuit& f = *u.frame_;
  const size_t net_count = f.nets().size();
  u.net_nodes_.assign(net_count * static_cast<size_t>(k), 0);
  u.nodes_.reserve(net_count * static_cast<size_t>(k));

  for (int cycle = 1; cycle <= k; ++cycle) {
    auto slot = [&](NetId net) -> NodeId& { return u.net_nodes_[(cycle - 1) * net_count + net]; };
    for (NetId in : f.inputs()) {
      slot(in) = static_cast<NodeId>(u.nodes_.size());
      u.nodes_.push_back(Node{GateKind::Buf, 0, {0, 0}, NodeRole::Input, in, cycle});
    }
    for (NetId r : f.registers()) {
      Node n{GateKind::Buf, 0, {0, 0}, NodeRole::RegisterRead, r, cycle};
      if (cycle == 1) {
        n.fn = f.net(r).init ? GateKind::Const1 : GateKind::Const0;
      } else {
        n.arity = 1;
        n.operands[0] = u.node_of(f.net(r).next, cycle - 1);
      }
      slot(r) = static_cast<NodeId>(u.nodes_.size());
      u.nodes_.push_back(n);
    }
    for (NetId g : f.topo_order()) {
      const Net& net = f.net(g);
      Node n{net.gate, static_cast<std::uint8_t>(net.operands.size()), {0, 0}, NodeRole::Gate, g, cycle};
      for (size_t i = 0; i < net.operands.size(); ++i) n.operands[i] = slot(net.operands[i]);
      slot(g) = static_cast<NodeId>(u.nodes_.size());
      u.nodes_.push_back(n);
    }
  }
  return u;
}

UnrolledCircuit unroll(const SequentialCircuit& circuit, int k) {
  return unroll(std::make_shared<const SequentialCircuit>(circuit), k);
}

std::optional<NodeId> UnrolledCircuit::find_instance(const GateInstance& inst) const {
  if (inst.cycle < 1 || inst.cycle > k_ || inst.net >= frame_->nets().size()) return std::nullopt;
  NetKind kind = frame_->net(inst.net).kind;
  if (inst.kind == InstanceKind::Logic && kind != NetKind::Gate) return std::nullopt;
  if (inst.kind == InstanceKind::Register && kind != NetKind::Register) return std::nullopt;
  return node_of(inst.net, inst.cycle);
}

std::vector<GateInstance> UnrolledCircuit::instances() const {
  std::vector<GateInstance> out;
  for (int cycle = 1; cycle <= k_; ++cycle) {
    for (NetId r : frame_->registers()) out.push_back({cycle, r, InstanceKind::Register});
    for (NetId g : frame_->gates()) out.push_back({cycle, g, InstanceKind::Logic});
  }
  std::sort(out.begin(), out.end());
  return out;
}

void UnrolledCircuit::set_function(NodeId id, GateKind fn, bool drop_operands) {
  Node& n = nodes_[id];
  n.fn = fn;
  if (drop_operands) n.arity = 0;
}

std::string instance_name(const SequentialCircuit& frame, const GateInstance& inst) {
  return frame.net(inst.net).name + "@" + std::to_string(inst.cycle);
}

GateInstance parse_instance(const SequentialCircuit& frame, std::string_view text) {
  auto at = text.rfind('@');
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::UnknownInstance, "instance '" + std::string(text) + "' must be <name>@<cycle>");
  }
  auto name = text.substr(0, at);
  auto num = text.substr(at + 1);
  int cycle = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), cycle);
  if (ec != std::errc() || ptr != num.data() + num.size() || cycle < 1) {
    throw Error(ErrorCode::UnknownInstance, "bad cycle in instance '" + std::string(text) + "'");
  }
  auto id = frame.find(name);
  if (!id || frame.net(*id).kind == NetKind::Input) {
    throw Error(ErrorCode::UnknownInstance, "no gate or register named '" + std::string(name) + "'");
  }
  return {cycle, *id, frame.net(*id).kind == NetKind::Register ? InstanceKind::Register : InstanceKind::Logic};
}

void validate_blacklist(const SequentialCircuit& frame, const Blacklist& blacklist) {
  for (const auto& name : blacklist) {
    auto id = frame.find(name);
    if (!id || frame.net(*id).kind == NetKind::Input) {
      throw Error(ErrorCode::UnknownBlacklistGate, "blacklist entry '" + name + "' is not a gate or register");
    }
  }
}

std::vector<GateInstance> fault_locations(const UnrolledCircuit& unrolled, const Blacklist& blacklist,
                                          Location location) {
  const SequentialCircuit& f = unrolled.frame();
  std::vector<GateInstance> out;
  for (int cycle = 1; cycle <= unrolled.k(); ++cycle) {
    if (includes_registers(location)) {
      for (NetId r : f.registers()) {
        if (!blacklist.count(f.net(r).name)) out.push_back({cycle, r, InstanceKind::Register});
      }
    }
    if (includes_logic(location)) {
      for (NetId g : f.gates()) {
        if (!blacklist.count(f.net(g).name)) out.push_back({cycle, g, InstanceKind::Logic});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace frv
