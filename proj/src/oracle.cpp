#include "frv/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

namespace frv {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

u128 sat_mul(u128 a, u128 b) {
  if (a == 0 || b == 0) return 0;
  if (a > u128(kSaturated) / b) return kSaturated;
  return std::min<u128>(a * b, kSaturated);
}

u128 sat_add(u128 a, u128 b) { return std::min<u128>(a + b, kSaturated); }

// Locations ranked by (cycle, name); registers and gates share one namespace.
std::vector<GateInstance> ranked(const SequentialCircuit& frame, std::vector<GateInstance> locs) {
  std::sort(locs.begin(), locs.end(), [&](const GateInstance& a, const GateInstance& b) {
    if (a.cycle != b.cycle) return a.cycle < b.cycle;
    return frame.net(a.net).name < frame.net(b.net).name;
  });
  return locs;
}

// Depth-first walk over admissible event lists; `visit` returns false to stop.
template <typename Visit>
bool walk(const std::vector<GateInstance>& locs, const std::vector<FaultType>& types, const FaultResistanceModel& m,
          size_t start, std::map<int, int>& per_cycle, std::vector<std::pair<size_t, FaultType>>& cur, Visit& visit) {
  for (size_t i = start; i < locs.size(); ++i) {
    int& cnt = per_cycle[locs[i].cycle];
    if (cnt >= m.ne) continue;
    if (cnt == 0) {
      int active = 0;
      for (const auto& [c, n] : per_cycle) active += n > 0;
      if (active >= m.nc) continue;
    }
    ++cnt;
    for (FaultType t : types) {
      cur.emplace_back(i, t);
      bool go = visit(cur) && walk(locs, types, m, i + 1, per_cycle, cur, visit);
      cur.pop_back();
      if (!go) {
        --per_cycle[locs[i].cycle];
        return false;
      }
    }
    --per_cycle[locs[i].cycle];
  }
  return true;
}

// Input words for sequences base .. base + 63 (cycle 1 first, first input
// most significant); also returns the lane mask.
std::uint64_t fill_block(std::uint64_t base, std::uint64_t count, int k, size_t per_cycle, InputWords& words) {
  const size_t total = per_cycle * static_cast<size_t>(k);
  const std::uint64_t lanes = std::min<std::uint64_t>(64, count - base);
  words.assign(k, std::vector<std::uint64_t>(per_cycle, 0));
  for (int c = 0; c < k; ++c) {
    for (size_t i = 0; i < per_cycle; ++i) {
      const size_t shift = total - 1 - (c * per_cycle + i);
      std::uint64_t w = 0;
      for (std::uint64_t l = 0; l < lanes; ++l) w |= (((base + l) >> shift) & 1ULL) << l;
      words[c][i] = w;
    }
  }
  return lanes == 64 ? ~0ULL : (1ULL << lanes) - 1;
}

InputSequence sequence_of(std::uint64_t n, int k, size_t per_cycle) {
  const size_t total = per_cycle * static_cast<size_t>(k);
  InputSequence seq(k, Bits(per_cycle));
  for (int c = 0; c < k; ++c) {
    for (size_t i = 0; i < per_cycle; ++i) seq[c][i] = ((n >> (total - 1 - (c * per_cycle + i))) & 1ULL) != 0;
  }
  return seq;
}

struct InputSpace {
  std::uint64_t count = 0;
  std::vector<InputWords> blocks;
  std::vector<std::uint64_t> masks;
  std::vector<WordTrace> golden;
};

InputSpace input_space(const UnrolledCircuit& circuit, const OracleBudget& budget) {
  const size_t per_cycle = circuit.frame().inputs().size();
  const size_t bits = per_cycle * static_cast<size_t>(circuit.k());
  if (bits > static_cast<size_t>(budget.max_input_bits) || bits > 30) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(bits) + " input bits exceed the oracle budget of " +
                                               std::to_string(budget.max_input_bits));
  }
  InputSpace s;
  s.count = 1ULL << bits;
  WordSimulator sim(circuit);
  for (std::uint64_t base = 0; base < s.count; base += 64) {
    InputWords w;
    s.masks.push_back(fill_block(base, s.count, circuit.k(), per_cycle, w));
    WordTrace t;
    sim.run(w, {}, t);
    s.blocks.push_back(std::move(w));
    s.golden.push_back(std::move(t));
  }
  return s;
}

}  // namespace

std::uint64_t count_fault_vectors(const SequentialCircuit& frame, const std::vector<GateInstance>& locations,
                                  const FaultResistanceModel& model) {
  (void)frame;
  std::map<int, int> per_cycle;
  for (const auto& l : locations) ++per_cycle[l.cycle];
  const int t = model.types.size();
  // dp[m]: weighted count of choices touching exactly m cycles so far.
  std::vector<u128> dp(model.nc + 1, 0);
  dp[0] = 1;
  for (const auto& [cycle, L] : per_cycle) {
    u128 f = 0;
    u128 binom = 1, tpow = 1;
    for (int j = 1; j <= std::min(model.ne, L); ++j) {
      binom = binom * static_cast<u128>(L - j + 1) / static_cast<u128>(j);
      tpow = sat_mul(tpow, t);
      f = sat_add(f, sat_mul(std::min<u128>(binom, kSaturated), tpow));
    }
    for (int m = model.nc; m >= 1; --m) dp[m] = sat_add(dp[m], sat_mul(dp[m - 1], f));
  }
  u128 total = 0;
  for (int m = 1; m <= model.nc; ++m) total = sat_add(total, dp[m]);
  return static_cast<std::uint64_t>(total);
}

void enumerate_fault_vectors(const SequentialCircuit& frame, const std::vector<GateInstance>& locations,
                             const FaultResistanceModel& model, const OracleBudget& budget,
                             const std::function<bool(const FaultVector&)>& visit) {
  std::uint64_t n = count_fault_vectors(frame, locations, model);
  if (n > budget.max_vectors) {
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(n) + " fault vectors exceed the budget of " + std::to_string(budget.max_vectors));
  }
  auto locs = ranked(frame, locations);
  auto types = model.types.sorted();
  std::map<int, int> per_cycle;
  std::vector<std::pair<size_t, FaultType>> cur;
  auto fn = [&](const std::vector<std::pair<size_t, FaultType>>& ev) {
    std::vector<FaultEvent> events;
    for (const auto& [i, t] : ev) events.push_back({locs[i], t});
    return visit(FaultVector(std::move(events)));
  };
  walk(locs, types, model, 0, per_cycle, cur, fn);
}

OracleVerdict brute_force_verdict(const UnrolledCircuit& circuit, const Blacklist& blacklist,
                                  const FaultResistanceModel& model, const OracleBudget& budget) {
  validate_blacklist(circuit.frame(), blacklist);
  auto locations = fault_locations(circuit, blacklist, model.location);
  std::uint64_t n = count_fault_vectors(circuit.frame(), locations, model);
  if (n > budget.max_vectors) {
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(n) + " fault vectors exceed the budget of " + std::to_string(budget.max_vectors));
  }
  InputSpace space = input_space(circuit, budget);

  auto locs = ranked(circuit.frame(), locations);
  std::vector<NodeId> node(locs.size());
  for (size_t i = 0; i < locs.size(); ++i) node[i] = *circuit.find_instance(locs[i]);
  auto types = model.types.sorted();

  OracleVerdict verdict;
  WordSimulator sim(circuit);
  WordTrace bad;
  std::vector<NodeFault> faults;
  auto check = [&](const std::vector<std::pair<size_t, FaultType>>& ev) {
    ++verdict.vectors_checked;
    faults.clear();
    for (const auto& [i, t] : ev) faults.push_back({node[i], t});
    std::sort(faults.begin(), faults.end(), [](const NodeFault& a, const NodeFault& b) { return a.node < b.node; });
    for (size_t b = 0; b < space.blocks.size(); ++b) {
      sim.run(space.blocks[b], faults, bad);
      std::uint64_t eff = effective_lanes(space.golden[b], bad) & space.masks[b];
      if (!eff) continue;
      std::vector<FaultEvent> events;
      for (const auto& [i, t] : ev) events.push_back({locs[i], t});
      verdict.resistant = false;
      verdict.vector = FaultVector(std::move(events));
      verdict.inputs = sequence_of(b * 64 + static_cast<std::uint64_t>(__builtin_ctzll(eff)), circuit.k(),
                                   circuit.frame().inputs().size());
      return false;
    }
    return true;
  };
  std::map<int, int> per_cycle;
  std::vector<std::pair<size_t, FaultType>> cur;
  walk(locs, types, model, 0, per_cycle, cur, check);
  return verdict;
}

std::vector<InputSequence> effective_witnesses(const UnrolledCircuit& circuit, const FaultVector& v,
                                               const OracleBudget& budget) {
  if (v.empty()) throw Error(ErrorCode::EmptyVector, "effectiveness is defined for non-empty vectors only");
  InputSpace space = input_space(circuit, budget);
  auto faults = node_faults(circuit, v);
  WordSimulator sim(circuit);
  WordTrace bad;
  std::vector<InputSequence> out;
  for (size_t b = 0; b < space.blocks.size(); ++b) {
    sim.run(space.blocks[b], faults, bad);
    std::uint64_t eff = effective_lanes(space.golden[b], bad) & space.masks[b];
    for (int l = 0; l < 64; ++l) {
      if ((eff >> l) & 1ULL) out.push_back(sequence_of(b * 64 + l, circuit.k(), circuit.frame().inputs().size()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Netlist under construction. Nets are names; std::nullopt stands for
// constant 0 so constant inputs fold away instead of becoming gates.
class DocBuilder {
 public:
  using Net = std::optional<std::string>;

  explicit DocBuilder(NetlistDoc& doc, std::string prefix) : doc_(doc), prefix_(std::move(prefix)) {}

  std::string gate(GateKind kind, std::vector<std::string> ops, std::string name = {}) {
    if (name.empty()) name = prefix_ + std::to_string(counter_++);
    doc_.gates.push_back({name, kind, std::move(ops), {}});
    return name;
  }

  Net and2(const Net& a, const Net& b) { return a && b ? Net(gate(GateKind::And, {*a, *b})) : std::nullopt; }
  Net or2(const Net& a, const Net& b) {
    if (!a) return b;
    if (!b) return a;
    return gate(GateKind::Or, {*a, *b});
  }
  Net xor2(const Net& a, const Net& b) {
    if (!a) return b;
    if (!b) return a;
    return gate(GateKind::Xor, {*a, *b});
  }

 private:
  NetlistDoc& doc_;
  std::string prefix_;
  int counter_ = 0;
};

bool truth_table_sat(const Cnf& phi) {
  const int m = phi.num_vars;
  for (std::uint32_t a = 0; a < (1u << m); ++a) {
    bool all = std::all_of(phi.clauses.begin(), phi.clauses.end(), [&](const Clause& c) {
      return std::any_of(c.begin(), c.end(), [&](int l) { return (((a >> (std::abs(l) - 1)) & 1u) != 0) == (l > 0); });
    });
    if (all) return true;
  }
  return false;
}

// Net that is 1 iff 1 <= popcount(bits) <= hi, via a binary ripple counter
// and constant comparators.
DocBuilder::Net in_range(DocBuilder& b, const std::vector<std::string>& bits, int hi) {
  int width = 1;
  while ((1 << width) <= static_cast<int>(bits.size())) ++width;
  std::vector<DocBuilder::Net> sum(width);
  for (const auto& x : bits) {
    DocBuilder::Net carry = x;
    for (int i = 0; i < width && carry; ++i) {
      DocBuilder::Net s = b.xor2(sum[i], carry);
      carry = b.and2(sum[i], carry);
      sum[i] = s;
    }
  }
  // sum > hi, scanning from the least significant bit.
  DocBuilder::Net greater;
  for (int i = 0; i < width; ++i) {
    greater = ((hi >> i) & 1) ? b.and2(sum[i], greater) : b.or2(sum[i], greater);
  }
  DocBuilder::Net nonzero;
  for (const auto& s : sum) nonzero = b.or2(nonzero, s);
  if (!nonzero) return std::nullopt;
  if (!greater) return nonzero;
  return b.and2(nonzero, DocBuilder::Net(b.gate(GateKind::Not, {*greater})));
}

}  // namespace

GeneratedInstance np_hardness_instance(const Cnf& phi, int ne) {
  if (phi.num_vars > 8) {
    throw Error(ErrorCode::TooManyVars, "formula has " + std::to_string(phi.num_vars) + " variables, at most 8 supported");
  }
  if (ne < 1) throw Error(ErrorCode::InvalidModel, "ne must be >= 1");
  GeneratedInstance g;
  NetlistDoc& doc = g.netlist;
  doc.name = "np_ne" + std::to_string(ne);
  doc.default_cycles = 3;
  for (int v = 1; v <= phi.num_vars; ++v) doc.inputs.push_back("x" + std::to_string(v));

  const int copies = 2 * ne + 1;
  std::vector<std::string> r1, r2;
  for (int j = 1; j <= copies; ++j) {
    DocBuilder b(doc, "phi" + std::to_string(j) + "_");
    std::map<int, std::string> neg;
    std::optional<std::string> conj;
    bool is_false = false;
    for (const auto& clause : phi.clauses) {
      std::optional<std::string> disj;
      for (int l : clause) {
        std::string lit = "x" + std::to_string(std::abs(l));
        if (l < 0) {
          auto it = neg.find(-l);
          if (it == neg.end()) it = neg.emplace(-l, b.gate(GateKind::Not, {lit})).first;
          lit = it->second;
        }
        disj = disj ? b.gate(GateKind::Or, {*disj, lit}) : lit;
      }
      if (!disj) {
        is_false = true;
        break;
      }
      conj = conj ? b.gate(GateKind::And, {*conj, *disj}) : *disj;
    }
    std::string out = "phi" + std::to_string(j);
    if (is_false) b.gate(GateKind::Const0, {}, out);
    else if (!conj) b.gate(GateKind::Const1, {}, out);
    else b.gate(GateKind::Buf, {*conj}, out);

    std::string ra = "r" + std::to_string(j), rb = "rr" + std::to_string(j);
    doc.registers.push_back({ra, false, {}});
    doc.registers.push_back({rb, false, {}});
    doc.next_state[ra] = out;
    doc.next_state[rb] = ra;
    r1.push_back(ra);
    r2.push_back(rb);
  }
  for (const auto& r : r1) doc.outputs.push_back(r);
  for (const auto& r : r2) doc.outputs.push_back(r);

  DocBuilder cmp(doc, "cmp_");
  auto low = in_range(cmp, r1, ne);
  auto high = in_range(cmp, r2, 2 * ne);
  auto any = cmp.or2(low, high);
  cmp.gate(GateKind::Buf, {*any}, "flag");
  doc.outputs.push_back("flag");
  doc.flag_output = "flag";

  g.expected_resistant = !truth_table_sat(phi);
  g.provenance = "np copies=" + std::to_string(copies) + " vars=" + std::to_string(phi.num_vars) +
                 " clauses=" + std::to_string(phi.clauses.size());
  return g;
}

// ---------------------------------------------------------------------------

namespace {

enum class FlagMode { Duplicate, Partial, Junk };

constexpr GateKind kBinary[] = {GateKind::And, GateKind::Or,  GateKind::Nand,
                                GateKind::Nor, GateKind::Xor, GateKind::Xnor};

}  // namespace

GeneratedInstance random_netlist(std::uint64_t seed, const RandomParams& params) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return n == 0 ? 0 : rng() % n; };

  GeneratedInstance g;
  NetlistDoc& doc = g.netlist;
  doc.name = "rand" + std::to_string(seed);
  const int ni = std::max(1, params.num_inputs);
  for (int i = 0; i < ni; ++i) doc.inputs.push_back("i" + std::to_string(i));

  FlagMode mode = params.with_flag ? static_cast<FlagMode>(pick(3)) : FlagMode::Junk;
  const bool duplicated = params.with_flag && mode != FlagMode::Junk;
  const int nouts = 1 + static_cast<int>(pick(2));
  const int checker = duplicated ? (mode == FlagMode::Duplicate ? 2 * nouts - 1 : 1) : (params.with_flag ? 1 : 0);
  const int room = std::max(2, params.max_gates - checker);
  const int core_gates = duplicated ? std::max(2, 2 + static_cast<int>(pick(room / 2 - 1))) : 2 + static_cast<int>(pick(room - 1));
  const int max_regs = duplicated ? params.max_regs / 2 : params.max_regs;
  const int nregs = static_cast<int>(pick(max_regs + 1));

  std::vector<std::string> pool = doc.inputs;
  for (int r = 0; r < nregs; ++r) {
    std::string name = "r" + std::to_string(r);
    doc.registers.push_back({name, pick(2) == 1, {}});
    pool.push_back(name);
  }
  std::vector<std::string> core;
  for (int i = 0; i < core_gates; ++i) {
    std::string name = "g" + std::to_string(i);
    // Favour recent nets so the circuit is deep rather than flat.
    auto operand = [&] {
      size_t n = pool.size();
      return pick(2) ? pool[n - 1 - pick(std::min<size_t>(n, 3))] : pool[pick(n)];
    };
    if (pick(6) == 0) {
      doc.gates.push_back({name, GateKind::Not, {operand()}, {}});
    } else {
      std::string a = operand(), b = operand();
      doc.gates.push_back({name, kBinary[pick(6)], {a, b}, {}});
    }
    pool.push_back(name);
    core.push_back(name);
  }
  for (const auto& r : doc.registers) doc.next_state[r.name] = core[pick(core.size())];

  std::vector<std::string> outs{core.back()};
  if (nouts == 2 && core.size() >= 2) outs.push_back(core[pick(core.size() - 1)]);
  doc.outputs = outs;

  std::string provenance = "random seed=" + std::to_string(seed);
  if (params.with_flag) {
    std::vector<std::string> checkers;
    if (duplicated) {
      // Shadow copy of the whole core (registers included).
      auto dup = [](const std::string& n) { return n + "_d"; };
      std::vector<RegisterDecl> regs = doc.registers;
      for (const auto& r : regs) {
        doc.registers.push_back({dup(r.name), r.init, {}});
        doc.next_state[dup(r.name)] = dup(doc.next_state[r.name]);
      }
      std::vector<GateDecl> gates = doc.gates;
      for (const auto& gd : gates) {
        GateDecl copy{dup(gd.name), gd.kind, {}, {}};
        for (const auto& op : gd.operands) {
          bool is_input = std::find(doc.inputs.begin(), doc.inputs.end(), op) != doc.inputs.end();
          copy.operands.push_back(is_input ? op : dup(op));
        }
        doc.gates.push_back(std::move(copy));
      }
      size_t compared = mode == FlagMode::Duplicate ? outs.size() : 1;
      std::vector<std::string> diffs;
      for (size_t i = 0; i < compared; ++i) {
        std::string name = compared == 1 ? "flag" : "chk" + std::to_string(i);
        doc.gates.push_back({name, GateKind::Xor, {outs[i], dup(outs[i])}, {}});
        diffs.push_back(name);
        checkers.push_back(name);
      }
      if (compared == 2) {
        doc.gates.push_back({"flag", GateKind::Or, {diffs[0], diffs[1]}, {}});
        checkers.push_back("flag");
      }
      provenance += mode == FlagMode::Duplicate ? " flag=duplicate" : " flag=partial";
    } else {
      std::string a = pool[doc.inputs.size() + pick(pool.size() - doc.inputs.size())];
      std::string b = pool[pick(pool.size())];
      doc.gates.push_back({"flag", pick(2) ? GateKind::And : GateKind::Nor, {a, b}, {}});
      checkers.push_back("flag");
      provenance += " flag=junk";
    }
    doc.outputs.push_back("flag");
    doc.flag_output = "flag";
    g.suggested_blacklist.insert(checkers.begin(), checkers.end());
  }
  g.provenance = provenance;
  return g;
}

}  // namespace frv
