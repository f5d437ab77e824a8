#include "frv/simulator.hpp"

#include <algorithm>
#include <map>

namespace frv {

FaultVector::FaultVector(std::vector<FaultEvent> events) : events_(std::move(events)) {
  std::sort(events_.begin(), events_.end(),
            [](const FaultEvent& a, const FaultEvent& b) { return a.instance < b.instance; });
  for (size_t i = 1; i < events_.size(); ++i) {
    if (events_[i].instance == events_[i - 1].instance) {
      throw Error(ErrorCode::DuplicateInstance, "a gate instance may be faulted at most once per vector");
    }
  }
}

int FaultVector::sharp_clk() const {
  int n = 0;
  for (size_t i = 0; i < events_.size(); ++i) {
    if (i == 0 || events_[i].instance.cycle != events_[i - 1].instance.cycle) ++n;
  }
  return n;
}

int FaultVector::max_epc() const {
  std::map<int, int> per_cycle;
  int best = 0;
  for (const auto& e : events_) best = std::max(best, ++per_cycle[e.instance.cycle]);
  return best;
}

std::string describe(const SequentialCircuit& frame, const FaultVector& v) {
  std::string out = "{";
  for (size_t i = 0; i < v.events().size(); ++i) {
    const auto& e = v.events()[i];
    if (i) out += ", ";
    out += "e(" + std::to_string(e.instance.cycle) + ", " + frame.net(e.instance.net).name + ", " +
           std::string(to_string(e.type)) + ")";
  }
  return out + "}";
}

std::string format_bits(const Bits& bits) {
  std::string s;
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

Bits parse_bits(std::string_view text) {
  Bits out;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorCode::ShapeMismatch, "expected a bit string, got '" + std::string(text) + "'");
    out.push_back(c == '1');
  }
  return out;
}

// ---------------------------------------------------------------------------

WordSimulator::WordSimulator(const UnrolledCircuit& circuit)
    : circuit_(&circuit), values_(circuit.nodes().size(), 0), input_slot_(circuit.nodes().size(), 0) {
  const auto& ins = circuit.frame().inputs();
  for (NodeId id = 0; id < circuit.nodes().size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.role == NodeRole::Input) input_slot_[id] = std::find(ins.begin(), ins.end(), n.net) - ins.begin();
  }
}

void WordSimulator::run(const InputWords& inputs, std::span<const NodeFault> faults, WordTrace& out) {
  const UnrolledCircuit& c = *circuit_;
  const SequentialCircuit& f = c.frame();
  const auto& nodes = c.nodes();
  size_t next_fault = 0;
  for (NodeId id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    std::uint64_t v;
    if (n.role == NodeRole::Input) {
      v = inputs[n.cycle - 1][input_slot_[id]];
    } else {
      v = eval_word(n.fn, n.arity > 0 ? values_[n.operands[0]] : 0, n.arity > 1 ? values_[n.operands[1]] : 0);
    }
    while (next_fault < faults.size() && faults[next_fault].node == id) {
      switch (faults[next_fault].type) {
        case FaultType::Set: v = ~0ULL; break;
        case FaultType::Reset: v = 0; break;
        case FaultType::BitFlip: v = ~v; break;
      }
      ++next_fault;
    }
    values_[id] = v;
  }

  const int k = c.k();
  out.outputs.assign(k, std::vector<std::uint64_t>(f.data_outputs().size(), 0));
  out.flag.assign(k, 0);
  for (int cycle = 1; cycle <= k; ++cycle) {
    for (size_t i = 0; i < f.data_outputs().size(); ++i) {
      out.outputs[cycle - 1][i] = values_[c.output_node(f.data_outputs()[i], cycle)];
    }
    if (auto fi = f.flag_index()) out.flag[cycle - 1] = values_[c.output_node(*fi, cycle)];
  }
}

std::uint64_t effective_lanes(const WordTrace& golden, const WordTrace& faulty) {
  std::uint64_t alive = ~0ULL;
  std::uint64_t effective = 0;
  for (size_t i = 0; i < faulty.flag.size(); ++i) {
    alive &= ~faulty.flag[i];
    std::uint64_t diff = 0;
    for (size_t o = 0; o < golden.outputs[i].size(); ++o) diff |= golden.outputs[i][o] ^ faulty.outputs[i][o];
    effective |= alive & diff;
  }
  return effective;
}

std::vector<NodeFault> node_faults(const UnrolledCircuit& circuit, const FaultVector& v) {
  std::vector<NodeFault> out;
  out.reserve(v.size());
  for (const auto& e : v.events()) {
    auto node = circuit.find_instance(e.instance);
    if (!node) throw Error(ErrorCode::UnknownInstance, "fault on an instance the circuit does not have");
    out.push_back({*node, e.type});
  }
  std::sort(out.begin(), out.end(), [](const NodeFault& a, const NodeFault& b) { return a.node < b.node; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_shape(const UnrolledCircuit& circuit, const InputSequence& inputs) {
  if (static_cast<int>(inputs.size()) != circuit.k()) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(circuit.k()) + " input vectors, got " +
                                              std::to_string(inputs.size()));
  }
  for (const auto& x : inputs) {
    if (x.size() != circuit.frame().inputs().size()) {
      throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(circuit.frame().inputs().size()) +
                                                " input bits per cycle, got " + std::to_string(x.size()));
    }
  }
}

// Evaluates every node for one input sequence.
std::vector<bool> eval_nodes(const UnrolledCircuit& circuit, const InputSequence& inputs) {
  std::vector<bool> values(circuit.nodes().size());
  const auto& ins = circuit.frame().inputs();
  for (NodeId id = 0; id < circuit.nodes().size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.role == NodeRole::Input) {
      size_t idx = std::find(ins.begin(), ins.end(), n.net) - ins.begin();
      values[id] = inputs[n.cycle - 1][idx];
    } else {
      values[id] = eval_bit(n.fn, n.arity > 0 && values[n.operands[0]], n.arity > 1 && values[n.operands[1]]);
    }
  }
  return values;
}

// Data output values per cycle, keyed by output name.
std::vector<std::map<std::string, bool>> named_outputs(const UnrolledCircuit& c, const InputSequence& inputs) {
  auto values = eval_nodes(c, inputs);
  std::vector<std::map<std::string, bool>> out(c.k());
  for (int cycle = 1; cycle <= c.k(); ++cycle) {
    for (size_t port : c.frame().data_outputs()) {
      out[cycle - 1][c.frame().outputs()[port].name] = values[c.output_node(port, cycle)];
    }
  }
  return out;
}

}  // namespace

Trace run_trace(const UnrolledCircuit& circuit, const InputSequence& inputs) {
  check_shape(circuit, inputs);
  const SequentialCircuit& f = circuit.frame();
  auto values = eval_nodes(circuit, inputs);
  Trace trace(circuit.k());
  for (int cycle = 1; cycle <= circuit.k(); ++cycle) {
    CycleTrace& t = trace[cycle - 1];
    t.inputs = inputs[cycle - 1];
    for (size_t port : f.data_outputs()) t.outputs.push_back(values[circuit.output_node(port, cycle)]);
    if (auto fi = f.flag_index()) t.flag = values[circuit.output_node(*fi, cycle)];
    for (NetId r : f.registers()) t.state.push_back(values[circuit.node_of(f.net(r).next, cycle)]);
  }
  return trace;
}

UnrolledCircuit apply_fault_vector(const UnrolledCircuit& circuit, const FaultVector& v) {
  UnrolledCircuit out = circuit;
  for (const auto& e : v.events()) {
    auto node = circuit.find_instance(e.instance);
    if (!node) {
      throw Error(ErrorCode::UnknownInstance,
                  "circuit has no instance " + instance_name(circuit.frame(), e.instance));
    }
    GateKind fn = apply_fault(circuit.node(*node).fn, e.type);
    out.set_function(*node, fn, e.type != FaultType::BitFlip);
  }
  return out;
}

EffectivenessResult check_effectiveness(const UnrolledCircuit& reference, const UnrolledCircuit& protected_circuit,
                                        const FaultVector& v, const InputSequence& inputs) {
  if (v.empty()) throw Error(ErrorCode::EmptyVector, "effectiveness is defined for non-empty vectors only");
  check_shape(protected_circuit, inputs);
  if (reference.k() != protected_circuit.k()) throw Error(ErrorCode::ShapeMismatch, "cycle counts differ");

  auto golden = named_outputs(reference, inputs);
  UnrolledCircuit faulty = apply_fault_vector(protected_circuit, v);
  Trace trace = run_trace(faulty, inputs);
  const SequentialCircuit& f = protected_circuit.frame();

  for (int cycle = 1; cycle <= faulty.k(); ++cycle) {
    const CycleTrace& t = trace[cycle - 1];
    if (t.flag) break;
    for (size_t i = 0; i < f.data_outputs().size(); ++i) {
      const std::string& name = f.outputs()[f.data_outputs()[i]].name;
      auto it = golden[cycle - 1].find(name);
      if (it == golden[cycle - 1].end()) {
        throw Error(ErrorCode::ShapeMismatch, "reference circuit has no output '" + name + "'");
      }
      if (it->second != t.outputs[i]) return {true, cycle, name};
    }
  }
  return {};
}

EffectivenessResult check_effectiveness(const UnrolledCircuit& golden, const FaultVector& v,
                                        const InputSequence& inputs) {
  return check_effectiveness(golden, golden, v, inputs);
}

std::optional<InputSequence> find_witness(const UnrolledCircuit& golden, const FaultVector& v) {
  if (v.empty()) throw Error(ErrorCode::EmptyVector, "effectiveness is defined for non-empty vectors only");
  const size_t per_cycle = golden.frame().inputs().size();
  const size_t total = per_cycle * static_cast<size_t>(golden.k());
  if (total > 24) {
    throw Error(ErrorCode::TooLargeForExhaustive,
                std::to_string(total) + " input bits exceed the exhaustive bound of 24");
  }
  auto faults = node_faults(golden, v);
  WordSimulator sim(golden);
  WordTrace good, bad;
  const std::uint64_t count = 1ULL << total;
  InputWords words(golden.k(), std::vector<std::uint64_t>(per_cycle, 0));

  auto bit_of = [&](std::uint64_t n, size_t pos) { return (n >> (total - 1 - pos)) & 1ULL; };
  for (std::uint64_t base = 0; base < count; base += 64) {
    const std::uint64_t lanes = std::min<std::uint64_t>(64, count - base);
    for (int c = 0; c < golden.k(); ++c) {
      for (size_t i = 0; i < per_cycle; ++i) {
        std::uint64_t w = 0;
        for (std::uint64_t l = 0; l < lanes; ++l) w |= bit_of(base + l, c * per_cycle + i) << l;
        words[c][i] = w;
      }
    }
    sim.run(words, {}, good);
    sim.run(words, faults, bad);
    std::uint64_t eff = effective_lanes(good, bad);
    if (lanes < 64) eff &= (1ULL << lanes) - 1;
    if (eff) {
      std::uint64_t n = base + static_cast<std::uint64_t>(__builtin_ctzll(eff));
      InputSequence seq(golden.k(), Bits(per_cycle));
      for (int c = 0; c < golden.k(); ++c) {
        for (size_t i = 0; i < per_cycle; ++i) seq[c][i] = bit_of(n, c * per_cycle + i) != 0;
      }
      return seq;
    }
  }
  return std::nullopt;
}

}  // namespace frv
