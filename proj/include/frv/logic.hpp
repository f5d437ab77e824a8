#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frv {

enum class GateKind : std::uint8_t {
  And,
  Or,
  Nand,
  Nor,
  Xor,
  Xnor,
  Not,
  Buf,
  Const1,
  Const0,
};

int arity(GateKind kind);
std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view token);

// The kind whose output is the negation of `kind` on every input
// (and<->nand, or<->nor, xor<->xnor, not<->buf, const0<->const1).
GateKind complement(GateKind kind);

// Bit-parallel evaluation: 64 independent lanes per word. Unused operands
// are ignored.
inline std::uint64_t eval_word(GateKind kind, std::uint64_t a, std::uint64_t b) {
  switch (kind) {
    case GateKind::And: return a & b;
    case GateKind::Or: return a | b;
    case GateKind::Nand: return ~(a & b);
    case GateKind::Nor: return ~(a | b);
    case GateKind::Xor: return a ^ b;
    case GateKind::Xnor: return ~(a ^ b);
    case GateKind::Not: return ~a;
    case GateKind::Buf: return a;
    case GateKind::Const1: return ~std::uint64_t{0};
    case GateKind::Const0: return 0;
  }
  return 0;
}

inline bool eval_bit(GateKind kind, bool a, bool b) {
  return (eval_word(kind, a ? ~0ULL : 0ULL, b ? ~0ULL : 0ULL) & 1ULL) != 0;
}

// ---------------------------------------------------------------------------
// Fault types and the adversary model.

enum class FaultType : std::uint8_t { Set = 0, Reset = 1, BitFlip = 2 };

std::string_view to_string(FaultType type);  // "s", "r", "bf"
std::optional<FaultType> fault_type_from_string(std::string_view token);

// Gate function after a fault of the given type: const1, const0, or the
// complement kind.
GateKind apply_fault(GateKind kind, FaultType type);

// Subset of {s, r, bf}, iterated in canonical order s < r < bf.
class FaultTypeSet {
 public:
  FaultTypeSet() = default;
  FaultTypeSet(std::initializer_list<FaultType> types);

  static FaultTypeSet all() { return {FaultType::Set, FaultType::Reset, FaultType::BitFlip}; }

  void insert(FaultType t) { bits_ |= mask(t); }
  bool contains(FaultType t) const { return (bits_ & mask(t)) != 0; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  std::vector<FaultType> sorted() const;

  bool operator==(const FaultTypeSet&) const = default;

 private:
  static std::uint8_t mask(FaultType t) { return static_cast<std::uint8_t>(1u << static_cast<int>(t)); }
  std::uint8_t bits_ = 0;
};

enum class Location : std::uint8_t { Comb, Reg, CombReg };

std::string_view to_string(Location loc);  // "c", "r", "cr"
std::optional<Location> location_from_string(std::string_view token);

inline bool includes_logic(Location loc) { return loc != Location::Reg; }
inline bool includes_registers(Location loc) { return loc != Location::Comb; }

// zeta(n_e, n_c, T, l).
struct FaultResistanceModel {
  int ne = 1;  // max fault events per cycle
  int nc = 1;  // max cycles with at least one event
  FaultTypeSet types = FaultTypeSet::all();
  Location location = Location::Comb;

  // Only k cycles exist, so larger n_c is equivalent to k.
  int effective_nc(int k) const { return nc < k ? nc : k; }

  bool operator==(const FaultResistanceModel&) const = default;
};

std::string describe(const FaultResistanceModel& model);

}  // namespace frv
