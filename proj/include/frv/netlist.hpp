#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frv/error.hpp"
#include "frv/logic.hpp"

namespace frv {

// Raw, syntactically validated netlist text. Names are resolved but no
// graph-level checks (cycles) have been run yet.
//
// Locations are diagnostics only; they do not take part in equality.
struct GateDecl {
  std::string name;
  GateKind kind = GateKind::Buf;
  std::vector<std::string> operands;
  SourceLoc loc;

  bool operator==(const GateDecl& o) const {
    return name == o.name && kind == o.kind && operands == o.operands;
  }
};

struct RegisterDecl {
  std::string name;
  bool init = false;
  SourceLoc loc;

  bool operator==(const RegisterDecl& o) const { return name == o.name && init == o.init; }
};

struct NetlistDoc {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::string> flag_output;
  std::vector<RegisterDecl> registers;
  std::vector<GateDecl> gates;
  std::map<std::string, std::string> next_state;
  std::optional<int> default_cycles;

  bool operator==(const NetlistDoc& o) const {
    return name == o.name && inputs == o.inputs && outputs == o.outputs &&
           flag_output == o.flag_output && registers == o.registers && gates == o.gates &&
           next_state == o.next_state && default_cycles == o.default_cycles;
  }

  const GateDecl* find_gate(std::string_view gate) const;
  bool is_register(std::string_view net) const;
  bool declares(std::string_view net) const;  // input, register or gate
};

// Grammar (one statement per line, '#' comments):
//   .name <ident>
//   .inputs <ident>+
//   .outputs <ident>+
//   .flag <ident>
//   .reg <ident> init=<0|1>
//   .cycles <n>
//   gate <ident> = <kind>(<ident>[, <ident>])
//   next <reg> = <ident>
NetlistDoc parse_netlist(std::string_view text);
NetlistDoc read_netlist_file(const std::string& path);

// Canonical text; comments and formatting are not preserved.
std::string write_netlist(const NetlistDoc& doc);

}  // namespace frv
