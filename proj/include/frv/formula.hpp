#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "frv/logic.hpp"

namespace frv {

// Edge into the formula DAG: node index shifted left once, low bit = negated.
class Ref {
 public:
  constexpr Ref() = default;
  static constexpr Ref make(std::uint32_t node, bool negated) { return Ref((node << 1) | (negated ? 1u : 0u)); }

  constexpr std::uint32_t node() const { return raw_ >> 1; }
  constexpr bool negated() const { return (raw_ & 1u) != 0; }
  constexpr std::uint32_t raw() const { return raw_; }
  constexpr Ref operator~() const { return Ref(raw_ ^ 1u); }

  auto operator<=>(const Ref&) const = default;

 private:
  constexpr explicit Ref(std::uint32_t raw) : raw_(raw) {}
  std::uint32_t raw_ = 0;
};

enum class VarRole : std::uint8_t { PrimaryInput, Control, Selection, CycleActive };

std::string_view to_string(VarRole role);

// Boolean formula DAG with structural hashing. Node 0 is the constant true.
// Or is stored as a negated And, Iff as a negated Xor.
class Formula {
 public:
  enum class Kind : std::uint8_t { Const, Var, And, Xor, Ite };

  struct Node {
    Kind kind = Kind::Const;
    std::uint32_t var = 0;    // Var: index into vars()
    std::vector<Ref> kids;    // And: >= 2 kids; Xor: 2; Ite: cond, then, else
  };

  struct VarInfo {
    std::string name;
    VarRole role = VarRole::PrimaryInput;
    Ref ref;
  };

  Formula();

  static constexpr Ref True() { return Ref::make(0, false); }
  static constexpr Ref False() { return Ref::make(0, true); }

  Ref var(std::string name, VarRole role);
  Ref mk_and(std::vector<Ref> kids);
  Ref mk_and(Ref a, Ref b) { return mk_and(std::vector<Ref>{a, b}); }
  Ref mk_or(std::vector<Ref> kids);
  Ref mk_or(Ref a, Ref b) { return mk_or(std::vector<Ref>{a, b}); }
  Ref mk_xor(Ref a, Ref b);
  Ref mk_iff(Ref a, Ref b) { return ~mk_xor(a, b); }
  Ref mk_ite(Ref c, Ref t, Ref e);
  // Gate function over up to two operand refs.
  Ref mk_gate(GateKind kind, Ref a, Ref b);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(Ref r) const { return nodes_[r.node()]; }
  const std::vector<VarInfo>& vars() const { return vars_; }
  bool is_const(Ref r) const { return r.node() == 0; }

  // Evaluates `root` under values for vars() (same order).
  bool evaluate(Ref root, const std::vector<bool>& var_values) const;

 private:
  Ref intern(Kind kind, std::vector<Ref> kids);

  std::vector<Node> nodes_;
  std::vector<VarInfo> vars_;
  std::map<std::pair<Kind, std::vector<Ref>>, std::uint32_t> table_;
};

}  // namespace frv
