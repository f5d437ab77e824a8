#include "frv/reductions.hpp"

#include <algorithm>

namespace frv {

FaultTypeReduction reduce_fault_types(const FaultResistanceModel& model) {
  if (!model.types.contains(FaultType::BitFlip)) {
    return {model, "bf not in T; fault types kept as given"};
  }
  FaultResistanceModel out = model;
  out.types = {FaultType::BitFlip};
  return {out, std::nullopt};
}

bool single_successor_applicable(const FaultResistanceModel& model) {
  const auto& t = model.types;
  bool types_ok = t.contains(FaultType::BitFlip) || (t.contains(FaultType::Set) && t.contains(FaultType::Reset));
  return types_ok && includes_logic(model.location);
}

bool aggressive_applicable(const FaultResistanceModel& model) {
  return model.types == FaultTypeSet{FaultType::BitFlip} && includes_logic(model.location);
}

Blacklist single_successor_blacklist(const SequentialCircuit& frame, const Blacklist& blacklist,
                                     const FaultResistanceModel& model) {
  if (!single_successor_applicable(model)) {
    throw Error(ErrorCode::NotApplicable, "single-successor reduction needs (bf in T or {s,r} in T) and l in {c, cr}; got " +
                                              describe(model));
  }
  Blacklist out;
  for (NetId g : frame.gates()) {
    const std::string& name = frame.net(g).name;
    if (blacklist.count(name)) continue;
    const auto& fo = frame.fanout(g);
    if (!fo.output_ports.empty() || !fo.registers.empty() || fo.gates.size() != 1) continue;
    if (blacklist.count(frame.net(fo.gates.front()).name)) continue;
    out.insert(name);
  }
  return out;
}

std::map<std::string, std::set<std::string>> ExitMap::named(const SequentialCircuit& frame) const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [exit, members] : m2) {
    auto& dst = out[frame.net(exit).name];
    for (NetId m : members) dst.insert(frame.net(m).name);
  }
  return out;
}

ExitMap single_exit_map(const SequentialCircuit& frame, const Blacklist& blacklist) {
  ExitMap em;
  em.m1.assign(frame.nets().size(), std::nullopt);

  auto own_exit = [&](NetId id) {
    em.m1[id] = id;
    em.m2[id].insert(id);
  };

  for (NetId r : frame.registers()) {
    ++em.visits;
    own_exit(r);
  }

  const auto& order = frame.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NetId g = *it;
    ++em.visits;
    const auto& fo = frame.fanout(g);
    if (!fo.output_ports.empty() || !fo.registers.empty() || fo.gates.empty()) {
      own_exit(g);
      continue;
    }
    // Successors come later in topological order, so they already have m1.
    std::optional<NetId> target = em.m1[fo.gates.front()];
    for (NetId s : fo.gates) {
      ++em.visits;
      if (em.m1[s] != target) target.reset();
    }
    bool ok = target && frame.net(*target).kind == NetKind::Gate && !blacklist.count(frame.net(*target).name);
    if (!ok) {
      own_exit(g);
      continue;
    }
    em.m1[g] = *target;
    em.m2[*target].insert(g);
  }
  return em;
}

Blacklist aggressive_blacklist(const SequentialCircuit& frame, const ExitMap& exits, const Blacklist& blacklist,
                               const FaultResistanceModel& model) {
  if (!aggressive_applicable(model)) {
    throw Error(ErrorCode::NotApplicable, "single-exit reduction needs T = {bf} and l in {c, cr}; got " + describe(model));
  }
  Blacklist out;
  for (NetId g : frame.gates()) {
    if (exits.m1[g] && *exits.m1[g] != g && !blacklist.count(frame.net(g).name)) out.insert(frame.net(g).name);
  }
  return out;
}

ReductionPlan plan_reductions(const SequentialCircuit& frame, const Blacklist& blacklist,
                              const FaultResistanceModel& model, const ReductionFlags& flags) {
  ReductionPlan plan{model, blacklist, {}, {}};

  if (flags.fault_type) {
    auto r = reduce_fault_types(model);
    if (r.note) {
      plan.skipped.push_back({"fault_type", *r.note});
    } else {
      AppliedReduction a{"fault_type", {}};
      for (FaultType t : model.types.sorted()) {
        if (!r.model.types.contains(t)) a.removed.emplace_back(to_string(t));
      }
      plan.applied.push_back(std::move(a));
      plan.effective_model = r.model;
    }
  }

  auto merge = [&](const char* name, const Blacklist& extra) {
    AppliedReduction a{name, {extra.begin(), extra.end()}};
    plan.effective_blacklist.insert(extra.begin(), extra.end());
    plan.applied.push_back(std::move(a));
  };

  const FaultResistanceModel& m = plan.effective_model;
  bool exit_done = false;
  if (flags.single_exit) {
    if (aggressive_applicable(m)) {
      merge("single_exit", aggressive_blacklist(frame, single_exit_map(frame, blacklist), blacklist, m));
      exit_done = true;
    } else if (!(m.types == FaultTypeSet{FaultType::BitFlip})) {
      plan.skipped.push_back({"single_exit", "effective T is not {bf}"});
    } else {
      plan.skipped.push_back({"single_exit", "location r has no logic gates to reduce"});
    }
  }

  if (flags.single_successor) {
    if (exit_done) {
      plan.skipped.push_back({"single_successor", "subsumed by single_exit"});
    } else if (single_successor_applicable(m)) {
      merge("single_successor", single_successor_blacklist(frame, blacklist, m));
    } else if (!includes_logic(m.location)) {
      plan.skipped.push_back({"single_successor", "location r has no logic gates to reduce"});
    } else {
      plan.skipped.push_back({"single_successor", "T contains neither bf nor both s and r"});
    }
  }
  return plan;
}

}  // namespace frv
