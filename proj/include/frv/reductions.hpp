#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frv/circuit.hpp"
#include "frv/config.hpp"
#include "frv/logic.hpp"

namespace frv {

struct FaultTypeReduction {
  FaultResistanceModel model;
  std::optional<std::string> note;  // set when the model was left alone
};

// T containing bf collapses to {bf}; anything else is returned unchanged.
FaultTypeReduction reduce_fault_types(const FaultResistanceModel& model);

// (bf in T or {s, r} in T) and l in {c, cr}.
bool single_successor_applicable(const FaultResistanceModel& model);
// T = {bf} and l in {c, cr}.
bool aggressive_applicable(const FaultResistanceModel& model);

// Logic gates outside the blacklist whose output reaches exactly one
// consumer, that consumer being a logic gate outside the blacklist. Computed
// on the frame; every cycle shares it. Throws NotApplicable.
Blacklist single_successor_blacklist(const SequentialCircuit& frame, const Blacklist& blacklist,
                                     const FaultResistanceModel& model);

// Exit decomposition of one frame. Registers are always their own exit.
struct ExitMap {
  std::vector<std::optional<NetId>> m1;   // indexed by net; empty for inputs
  std::map<NetId, std::set<NetId>> m2;    // exit -> members (including itself)
  size_t visits = 0;                      // gates plus edges inspected

  // m2 keyed and valued by net name.
  std::map<std::string, std::set<std::string>> named(const SequentialCircuit& frame) const;
};

ExitMap single_exit_map(const SequentialCircuit& frame, const Blacklist& blacklist);

// Gates absorbed into some other gate's exit, minus the blacklist.
// Throws NotApplicable.
Blacklist aggressive_blacklist(const SequentialCircuit& frame, const ExitMap& exits, const Blacklist& blacklist,
                               const FaultResistanceModel& model);

struct AppliedReduction {
  std::string name;           // "fault_type", "single_successor", "single_exit"
  std::vector<std::string> removed;  // gates added to the blacklist, or fault types dropped
};

struct SkippedReduction {
  std::string name;
  std::string reason;
};

struct ReductionPlan {
  FaultResistanceModel effective_model;
  Blacklist effective_blacklist;
  std::vector<AppliedReduction> applied;
  std::vector<SkippedReduction> skipped;
};

// Fault-type reduction first; then single-exit if T is now {bf}, otherwise
// single-successor when applicable. Requested reductions that cannot run are
// listed in `skipped`.
ReductionPlan plan_reductions(const SequentialCircuit& frame, const Blacklist& blacklist,
                              const FaultResistanceModel& model, const ReductionFlags& flags);

}  // namespace frv
