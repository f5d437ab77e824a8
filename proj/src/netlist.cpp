#include "frv/netlist.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace frv {

const GateDecl* NetlistDoc::find_gate(std::string_view gate) const {
  for (const auto& g : gates) {
    if (g.name == gate) return &g;
  }
  return nullptr;
}

bool NetlistDoc::is_register(std::string_view net) const {
  for (const auto& r : registers) {
    if (r.name == net) return true;
  }
  return false;
}

bool NetlistDoc::declares(std::string_view net) const {
  for (const auto& i : inputs) {
    if (i == net) return true;
  }
  return is_register(net) || find_gate(net) != nullptr;
}

namespace {

struct Token {
  std::string text;
  SourceLoc loc;
  bool punct = false;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.' ||
         c == '[' || c == ']';
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  char c0 = s[0];
  if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
  for (char c : s) {
    if (!is_word_char(c)) return false;
  }
  return true;
}

std::vector<Token> tokenize_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    SourceLoc loc{line_no, static_cast<int>(i) + 1};
    if (c == '=' || c == '(' || c == ')' || c == ',') {
      out.push_back({std::string(1, c), loc, true});
      ++i;
      continue;
    }
    if (!is_word_char(c)) {
      throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", loc);
    }
    size_t j = i;
    while (j < line.size() && is_word_char(line[j])) ++j;
    out.push_back({std::string(line.substr(i, j - i)), loc, false});
    i = j;
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line_no) : toks_(std::move(tokens)), line_(line_no) {}

  bool done() const { return pos_ >= toks_.size(); }

  const Token& peek() const { return toks_[pos_]; }

  SourceLoc here() const {
    if (done()) return {line_, toks_.empty() ? 1 : toks_.back().loc.col + static_cast<int>(toks_.back().text.size())};
    return toks_[pos_].loc;
  }

  Token ident(const char* what) {
    if (done() || peek().punct || !is_identifier(peek().text)) {
      throw Error(ErrorCode::SyntaxError, std::string("expected ") + what, here());
    }
    return toks_[pos_++];
  }

  Token word(const char* what) {
    if (done() || peek().punct) {
      throw Error(ErrorCode::SyntaxError, std::string("expected ") + what, here());
    }
    return toks_[pos_++];
  }

  void expect(char p) {
    if (done() || !peek().punct || peek().text[0] != p) {
      throw Error(ErrorCode::SyntaxError, std::string("expected '") + p + "'", here());
    }
    ++pos_;
  }

  bool accept(char p) {
    if (!done() && peek().punct && peek().text[0] == p) {
      ++pos_;
      return true;
    }
    return false;
  }

  void end() {
    if (!done()) throw Error(ErrorCode::SyntaxError, "unexpected token '" + peek().text + "'", here());
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int line_;
};

struct NamedRef {
  std::string name;
  SourceLoc loc;
};

}  // namespace

NetlistDoc parse_netlist(std::string_view text) {
  NetlistDoc doc;
  std::vector<NamedRef> input_refs;
  std::vector<NamedRef> output_refs;
  std::optional<NamedRef> flag_ref;
  std::vector<std::pair<NamedRef, NamedRef>> next_refs;
  std::vector<std::vector<SourceLoc>> operand_locs;
  bool have_name = false;

  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    auto tokens = tokenize_line(line, line_no);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    LineParser p(std::move(tokens), line_no);
    Token head = p.word("statement");
    const std::string& kw = head.text;

    if (kw == ".name") {
      if (have_name) throw Error(ErrorCode::SyntaxError, "duplicate .name", head.loc);
      doc.name = p.ident("netlist name").text;
      have_name = true;
      p.end();
    } else if (kw == ".inputs" || kw == ".outputs") {
      auto& refs = kw == ".inputs" ? input_refs : output_refs;
      if (p.done()) throw Error(ErrorCode::SyntaxError, "expected at least one name", p.here());
      while (!p.done()) {
        Token t = p.ident("net name");
        refs.push_back({t.text, t.loc});
      }
    } else if (kw == ".flag") {
      if (flag_ref) throw Error(ErrorCode::SyntaxError, "duplicate .flag", head.loc);
      Token t = p.ident("flag net name");
      flag_ref = NamedRef{t.text, t.loc};
      p.end();
    } else if (kw == ".reg") {
      Token t = p.ident("register name");
      Token key = p.word("init=<0|1>");
      if (key.text != "init") throw Error(ErrorCode::SyntaxError, "expected 'init'", key.loc);
      p.expect('=');
      Token v = p.word("0 or 1");
      if (v.text != "0" && v.text != "1") {
        throw Error(ErrorCode::SyntaxError, "init value must be 0 or 1", v.loc);
      }
      p.end();
      doc.registers.push_back({t.text, v.text == "1", t.loc});
    } else if (kw == ".cycles") {
      Token v = p.word("cycle count");
      int n = 0;
      for (char c : v.text) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || n > 1000000) {
          throw Error(ErrorCode::SyntaxError, "expected a positive integer", v.loc);
        }
        n = n * 10 + (c - '0');
      }
      if (n < 1) throw Error(ErrorCode::SyntaxError, "cycle count must be >= 1", v.loc);
      p.end();
      doc.default_cycles = n;
    } else if (kw == "gate") {
      Token name = p.ident("gate name");
      p.expect('=');
      Token kind_tok = p.word("gate kind");
      auto kind = gate_kind_from_string(kind_tok.text);
      if (!kind) throw Error(ErrorCode::UnknownGateKind, "unknown gate kind '" + kind_tok.text + "'", kind_tok.loc);
      p.expect('(');
      GateDecl g{name.text, *kind, {}, name.loc};
      std::vector<SourceLoc> locs;
      if (!p.accept(')')) {
        do {
          Token op = p.ident("operand");
          g.operands.push_back(op.text);
          locs.push_back(op.loc);
        } while (p.accept(','));
        p.expect(')');
      }
      p.end();
      if (static_cast<int>(g.operands.size()) != arity(g.kind)) {
        throw Error(ErrorCode::ArityMismatch,
                    "gate '" + g.name + "' of kind " + std::string(to_string(g.kind)) + " takes " +
                        std::to_string(arity(g.kind)) + " operand(s), got " +
                        std::to_string(g.operands.size()),
                    name.loc);
      }
      doc.gates.push_back(std::move(g));
      operand_locs.push_back(std::move(locs));
    } else if (kw == "next") {
      Token reg = p.ident("register name");
      p.expect('=');
      Token drv = p.ident("driver net");
      p.end();
      next_refs.push_back({{reg.text, reg.loc}, {drv.text, drv.loc}});
    } else {
      throw Error(ErrorCode::SyntaxError, "unknown statement '" + kw + "'", head.loc);
    }
    if (end == text.size()) break;
  }

  if (!have_name) doc.name = "netlist";

  // Unique names across inputs, registers and gates.
  std::unordered_map<std::string, SourceLoc> declared;
  auto declare = [&](const std::string& n, SourceLoc loc) {
    if (!declared.emplace(n, loc).second) {
      throw Error(ErrorCode::DuplicateName, "name '" + n + "' declared more than once", loc);
    }
  };
  for (const auto& r : input_refs) {
    declare(r.name, r.loc);
    doc.inputs.push_back(r.name);
  }
  for (const auto& r : doc.registers) declare(r.name, r.loc);
  for (const auto& g : doc.gates) declare(g.name, g.loc);

  for (size_t gi = 0; gi < doc.gates.size(); ++gi) {
    const auto& g = doc.gates[gi];
    for (size_t oi = 0; oi < g.operands.size(); ++oi) {
      if (!declared.count(g.operands[oi])) {
        throw Error(ErrorCode::UndefinedNet, "undefined net '" + g.operands[oi] + "'", operand_locs[gi][oi]);
      }
    }
  }

  std::set<std::string> seen_outputs;
  for (const auto& r : output_refs) {
    if (!declared.count(r.name)) {
      throw Error(ErrorCode::MissingOutputDriver, "output '" + r.name + "' has no driver", r.loc);
    }
    if (!seen_outputs.insert(r.name).second) {
      throw Error(ErrorCode::DuplicateName, "output '" + r.name + "' listed more than once", r.loc);
    }
    doc.outputs.push_back(r.name);
  }

  if (flag_ref) {
    if (!declared.count(flag_ref->name)) {
      throw Error(ErrorCode::MissingOutputDriver, "flag '" + flag_ref->name + "' has no driver", flag_ref->loc);
    }
    if (!seen_outputs.count(flag_ref->name)) {
      throw Error(ErrorCode::SyntaxError, "flag '" + flag_ref->name + "' must be listed in .outputs", flag_ref->loc);
    }
    doc.flag_output = flag_ref->name;
  }

  for (const auto& [reg, drv] : next_refs) {
    if (!doc.is_register(reg.name)) {
      throw Error(ErrorCode::UndefinedNet, "'" + reg.name + "' is not a declared register", reg.loc);
    }
    if (!declared.count(drv.name)) {
      throw Error(ErrorCode::UndefinedNet, "undefined net '" + drv.name + "'", drv.loc);
    }
    if (!doc.next_state.emplace(reg.name, drv.name).second) {
      throw Error(ErrorCode::DuplicateName, "register '" + reg.name + "' has more than one next", reg.loc);
    }
  }
  for (const auto& r : doc.registers) {
    if (!doc.next_state.count(r.name)) {
      throw Error(ErrorCode::MissingOutputDriver, "register '" + r.name + "' has no next-state driver", r.loc);
    }
  }
  return doc;
}

NetlistDoc read_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open netlist '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_netlist(ss.str());
}

std::string write_netlist(const NetlistDoc& doc) {
  std::ostringstream out;
  out << ".name " << doc.name << "\n";
  if (!doc.inputs.empty()) {
    out << ".inputs";
    for (const auto& i : doc.inputs) out << ' ' << i;
    out << "\n";
  }
  if (!doc.outputs.empty()) {
    out << ".outputs";
    for (const auto& o : doc.outputs) out << ' ' << o;
    out << "\n";
  }
  if (doc.flag_output) out << ".flag " << *doc.flag_output << "\n";
  if (doc.default_cycles) out << ".cycles " << *doc.default_cycles << "\n";
  for (const auto& r : doc.registers) out << ".reg " << r.name << " init=" << (r.init ? 1 : 0) << "\n";
  for (const auto& g : doc.gates) {
    out << "gate " << g.name << " = " << to_string(g.kind) << "(";
    for (size_t i = 0; i < g.operands.size(); ++i) {
      if (i) out << ", ";
      out << g.operands[i];
    }
    out << ")\n";
  }
  for (const auto& r : doc.registers) {
    auto it = doc.next_state.find(r.name);
    if (it != doc.next_state.end()) out << "next " << r.name << " = " << it->second << "\n";
  }
  return out.str();
}

}  // namespace frv
