#include "frv/logic.hpp"

namespace frv {

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::Not:
    case GateKind::Buf:
      return 1;
    case GateKind::Const0:
    case GateKind::Const1:
      return 0;
    default:
      return 2;
  }
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::Nand: return "nand";
    case GateKind::Nor: return "nor";
    case GateKind::Xor: return "xor";
    case GateKind::Xnor: return "xnor";
    case GateKind::Not: return "not";
    case GateKind::Buf: return "buf";
    case GateKind::Const1: return "const1";
    case GateKind::Const0: return "const0";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_string(std::string_view token) {
  static constexpr GateKind kAll[] = {
      GateKind::And, GateKind::Or,  GateKind::Nand,   GateKind::Nor,    GateKind::Xor,
      GateKind::Xnor, GateKind::Not, GateKind::Buf, GateKind::Const1, GateKind::Const0};
  for (GateKind k : kAll) {
    if (to_string(k) == token) return k;
  }
  return std::nullopt;
}

GateKind complement(GateKind kind) {
  switch (kind) {
    case GateKind::And: return GateKind::Nand;
    case GateKind::Nand: return GateKind::And;
    case GateKind::Or: return GateKind::Nor;
    case GateKind::Nor: return GateKind::Or;
    case GateKind::Xor: return GateKind::Xnor;
    case GateKind::Xnor: return GateKind::Xor;
    case GateKind::Not: return GateKind::Buf;
    case GateKind::Buf: return GateKind::Not;
    case GateKind::Const0: return GateKind::Const1;
    case GateKind::Const1: return GateKind::Const0;
  }
  return kind;
}

std::string_view to_string(FaultType type) {
  switch (type) {
    case FaultType::Set: return "s";
    case FaultType::Reset: return "r";
    case FaultType::BitFlip: return "bf";
  }
  return "?";
}

std::optional<FaultType> fault_type_from_string(std::string_view token) {
  if (token == "s") return FaultType::Set;
  if (token == "r") return FaultType::Reset;
  if (token == "bf") return FaultType::BitFlip;
  return std::nullopt;
}

GateKind apply_fault(GateKind kind, FaultType type) {
  switch (type) {
    case FaultType::Set: return GateKind::Const1;
    case FaultType::Reset: return GateKind::Const0;
    case FaultType::BitFlip: return complement(kind);
  }
  return kind;
}

FaultTypeSet::FaultTypeSet(std::initializer_list<FaultType> types) {
  for (FaultType t : types) insert(t);
}

int FaultTypeSet::size() const {
  int n = 0;
  for (int i = 0; i < 3; ++i) n += (bits_ >> i) & 1;
  return n;
}

std::vector<FaultType> FaultTypeSet::sorted() const {
  std::vector<FaultType> out;
  for (FaultType t : {FaultType::Set, FaultType::Reset, FaultType::BitFlip}) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::Comb: return "c";
    case Location::Reg: return "r";
    case Location::CombReg: return "cr";
  }
  return "?";
}

std::optional<Location> location_from_string(std::string_view token) {
  if (token == "c") return Location::Comb;
  if (token == "r") return Location::Reg;
  if (token == "cr") return Location::CombReg;
  return std::nullopt;
}

std::string describe(const FaultResistanceModel& model) {
  std::string types = "{";
  bool first = true;
  for (FaultType t : model.types.sorted()) {
    if (!first) types += ",";
    types += to_string(t);
    first = false;
  }
  types += "}";
  return "zeta(" + std::to_string(model.ne) + "," + std::to_string(model.nc) + "," + types +
         "," + std::string(to_string(model.location)) + ")";
}

}  // namespace frv
