#include "frv/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "frv/error.hpp"

namespace frv {

std::string_view to_string(CnfRole role) {
  switch (role) {
    case CnfRole::PrimaryInput: return "primary-input";
    case CnfRole::Control: return "control";
    case CnfRole::Selection: return "selection";
    case CnfRole::CycleActive: return "aux-d";
    case CnfRole::Tseitin: return "tseitin";
    case CnfRole::Cardinality: return "cardinality";
  }
  return "?";
}

int Cnf::new_var(CnfRole role, std::string name) {
  vars.push_back({std::move(name), role});
  return ++num_vars;
}

std::vector<Clause> at_most_k(const std::vector<int>& literals, int k, Cnf& cnf) {
  const int n = static_cast<int>(literals.size());
  std::vector<Clause> out;
  if (k >= n) return out;
  if (k <= 0) {
    for (int x : literals) out.push_back({-x});
    return out;
  }
  // s[i][j]: at least j + 1 of x_0..x_i are true (i < n - 1).
  std::vector<std::vector<int>> s(n - 1, std::vector<int>(k));
  for (auto& row : s) {
    for (int& v : row) v = cnf.new_var(CnfRole::Cardinality);
  }
  const auto& x = literals;
  out.push_back({-x[0], s[0][0]});
  for (int j = 1; j < k; ++j) out.push_back({-s[0][j]});
  for (int i = 1; i < n - 1; ++i) {
    out.push_back({-x[i], s[i][0]});
    out.push_back({-s[i - 1][0], s[i][0]});
    for (int j = 1; j < k; ++j) {
      out.push_back({-x[i], -s[i - 1][j - 1], s[i][j]});
      out.push_back({-s[i - 1][j], s[i][j]});
    }
    out.push_back({-x[i], -s[i - 1][k - 1]});
  }
  out.push_back({-x[n - 1], -s[n - 2][k - 1]});
  return out;
}

namespace {

CnfRole cnf_role(VarRole r) {
  switch (r) {
    case VarRole::PrimaryInput: return CnfRole::PrimaryInput;
    case VarRole::Control: return CnfRole::Control;
    case VarRole::Selection: return CnfRole::Selection;
    case VarRole::CycleActive: return CnfRole::CycleActive;
  }
  return CnfRole::Tseitin;
}

}  // namespace

TseitinResult tseitin_cnf(const Formula& f, Ref root) {
  TseitinResult res;
  Cnf& cnf = res.cnf;
  const auto& vars = f.vars();

  std::vector<size_t> order(vars.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vars[a].role < vars[b].role; });
  res.var_index.assign(vars.size(), 0);
  std::vector<int> node_var(f.nodes().size(), 0);
  for (size_t i : order) {
    res.var_index[i] = cnf.new_var(cnf_role(vars[i].role), vars[i].name);
    node_var[vars[i].ref.node()] = res.var_index[i];
  }

  if (root == Formula::True()) return res;
  if (root == Formula::False()) {
    cnf.clauses.push_back({});
    return res;
  }

  // Nodes reachable from the root, in index order (children first).
  std::vector<bool> live(root.node() + 1, false);
  live[root.node()] = true;
  for (std::uint32_t i = root.node() + 1; i-- > 0;) {
    if (!live[i]) continue;
    for (Ref k : f.nodes()[i].kids) live[k.node()] = true;
  }

  auto lit = [&](Ref r) { return r.negated() ? -node_var[r.node()] : node_var[r.node()]; };
  for (std::uint32_t i = 1; i <= root.node(); ++i) {
    const auto& n = f.nodes()[i];
    if (!live[i] || n.kind == Formula::Kind::Var) continue;
    int t = node_var[i] = cnf.new_var(CnfRole::Tseitin);
    switch (n.kind) {
      case Formula::Kind::And: {
        Clause big{t};
        for (Ref k : n.kids) {
          cnf.clauses.push_back({-t, lit(k)});
          big.push_back(-lit(k));
        }
        cnf.clauses.push_back(std::move(big));
        break;
      }
      case Formula::Kind::Xor: {
        int a = lit(n.kids[0]), b = lit(n.kids[1]);
        cnf.clauses.push_back({-t, a, b});
        cnf.clauses.push_back({-t, -a, -b});
        cnf.clauses.push_back({t, -a, b});
        cnf.clauses.push_back({t, a, -b});
        break;
      }
      case Formula::Kind::Ite: {
        int c = lit(n.kids[0]), a = lit(n.kids[1]), b = lit(n.kids[2]);
        cnf.clauses.push_back({-t, -c, a});
        cnf.clauses.push_back({-t, c, b});
        cnf.clauses.push_back({t, -c, -a});
        cnf.clauses.push_back({t, c, -b});
        break;
      }
      case Formula::Kind::Const:
      case Formula::Kind::Var: break;
    }
  }
  cnf.clauses.push_back({lit(root)});
  return res;
}

std::string emit_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& c : cnf.clauses) {
    for (int l : c) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

std::string dimacs_sidecar(const Cnf& cnf) {
  nlohmann::ordered_json vars = nlohmann::ordered_json::object();
  for (int i = 0; i < cnf.num_vars; ++i) {
    const auto& v = cnf.vars[i];
    if (v.name.empty()) continue;
    vars[v.name] = {{"index", i + 1}, {"role", std::string(to_string(v.role))}};
  }
  nlohmann::ordered_json j;
  j["num_vars"] = cnf.num_vars;
  j["num_clauses"] = cnf.clauses.size();
  j["vars"] = std::move(vars);
  return j.dump(2) + "\n";
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  long declared_clauses = 0;
  Clause current;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf" || cnf.num_vars < 0) {
        throw Error(ErrorCode::SyntaxError, "bad DIMACS header", {line_no, 1});
      }
      header = true;
      cnf.vars.assign(cnf.num_vars, CnfVar{});
      continue;
    }
    if (!header) throw Error(ErrorCode::SyntaxError, "clause before 'p cnf' header", {line_no, 1});
    std::istringstream body(line);
    long lit;
    while (body >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::abs(lit) > cnf.num_vars) {
        throw Error(ErrorCode::SyntaxError, "literal " + std::to_string(lit) + " exceeds variable count", {line_no, 1});
      }
      current.push_back(static_cast<int>(lit));
    }
    if (!body.eof()) throw Error(ErrorCode::SyntaxError, "non-integer token in clause", {line_no, 1});
  }
  if (!header) throw Error(ErrorCode::SyntaxError, "missing 'p cnf' header");
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (static_cast<long>(cnf.clauses.size()) != declared_clauses) {
    throw Error(ErrorCode::SyntaxError, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                            std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

}  // namespace frv
