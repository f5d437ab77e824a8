#include "frv/formula.hpp"

#include <algorithm>

#include "frv/error.hpp"

namespace frv {

std::string_view to_string(VarRole role) {
  switch (role) {
    case VarRole::PrimaryInput: return "primary-input";
    case VarRole::Control: return "control";
    case VarRole::Selection: return "selection";
    case VarRole::CycleActive: return "aux-d";
  }
  return "?";
}

Formula::Formula() { nodes_.push_back(Node{Kind::Const, 0, {}}); }

Ref Formula::var(std::string name, VarRole role) {
  std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{Kind::Var, static_cast<std::uint32_t>(vars_.size()), {}});
  Ref r = Ref::make(id, false);
  vars_.push_back({std::move(name), role, r});
  return r;
}

Ref Formula::intern(Kind kind, std::vector<Ref> kids) {
  auto key = std::make_pair(kind, kids);
  auto it = table_.find(key);
  if (it != table_.end()) return Ref::make(it->second, false);
  std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{kind, 0, std::move(kids)});
  table_.emplace(std::move(key), id);
  return Ref::make(id, false);
}

Ref Formula::mk_and(std::vector<Ref> kids) {
  std::vector<Ref> keep;
  keep.reserve(kids.size());
  for (Ref k : kids) {
    if (k == False()) return False();
    if (k != True()) keep.push_back(k);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  // x and ~x sit next to each other after sorting.
  for (size_t i = 1; i < keep.size(); ++i) {
    if (keep[i].node() == keep[i - 1].node()) return False();
  }
  if (keep.empty()) return True();
  if (keep.size() == 1) return keep.front();
  return intern(Kind::And, std::move(keep));
}

Ref Formula::mk_or(std::vector<Ref> kids) {
  for (Ref& k : kids) k = ~k;
  return ~mk_and(std::move(kids));
}

Ref Formula::mk_xor(Ref a, Ref b) {
  bool neg = a.negated() != b.negated();
  a = Ref::make(a.node(), false);
  b = Ref::make(b.node(), false);
  Ref out;
  if (a == b) {
    out = False();
  } else if (is_const(a)) {
    out = ~b;  // a is true
  } else if (is_const(b)) {
    out = ~a;
  } else {
    if (b < a) std::swap(a, b);
    out = intern(Kind::Xor, {a, b});
  }
  return neg ? ~out : out;
}

Ref Formula::mk_ite(Ref c, Ref t, Ref e) {
  if (c == True()) return t;
  if (c == False()) return e;
  if (t == e) return t;
  if (t == ~e) return mk_iff(c, t);
  if (t == True()) return mk_or(c, e);
  if (t == False()) return mk_and(~c, e);
  if (e == True()) return mk_or(~c, t);
  if (e == False()) return mk_and(c, t);
  if (c.negated()) {
    c = ~c;
    std::swap(t, e);
  }
  // Keep the then-branch positive so ite(c, ~t, ~e) shares with ite(c, t, e).
  if (t.negated()) return ~intern(Kind::Ite, {c, ~t, ~e});
  return intern(Kind::Ite, {c, t, e});
}

Ref Formula::mk_gate(GateKind kind, Ref a, Ref b) {
  switch (kind) {
    case GateKind::And: return mk_and(a, b);
    case GateKind::Or: return mk_or(a, b);
    case GateKind::Nand: return ~mk_and(a, b);
    case GateKind::Nor: return ~mk_or(a, b);
    case GateKind::Xor: return mk_xor(a, b);
    case GateKind::Xnor: return mk_iff(a, b);
    case GateKind::Not: return ~a;
    case GateKind::Buf: return a;
    case GateKind::Const1: return True();
    case GateKind::Const0: return False();
  }
  return False();
}

bool Formula::evaluate(Ref root, const std::vector<bool>& var_values) const {
  if (var_values.size() != vars_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(vars_.size()) + " variable values");
  }
  // Children always have smaller indices than their parents.
  std::vector<bool> val(root.node() + 1);
  for (std::uint32_t i = 0; i <= root.node(); ++i) {
    const Node& n = nodes_[i];
    auto get = [&](Ref r) { return val[r.node()] != r.negated(); };
    switch (n.kind) {
      case Kind::Const: val[i] = true; break;
      case Kind::Var: val[i] = var_values[n.var]; break;
      case Kind::And: val[i] = std::all_of(n.kids.begin(), n.kids.end(), get); break;
      case Kind::Xor: val[i] = get(n.kids[0]) != get(n.kids[1]); break;
      case Kind::Ite: val[i] = get(n.kids[0]) ? get(n.kids[1]) : get(n.kids[2]); break;
    }
  }
  return val[root.node()] != root.negated();
}

}  // namespace frv
