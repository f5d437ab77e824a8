#include <gtest/gtest.h>

#include "frv/error.hpp"
#include "frv/netlist.hpp"
#include "test_support.hpp"

namespace frv {
namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_netlist(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for:\n" << text;
  return ErrorCode::Io;
}

SourceLoc loc_of(const std::string& text) {
  try {
    parse_netlist(text);
  } catch (const Error& e) {
    return e.loc();
  }
  return {};
}

const char* kCounter = R"(
# two-bit counter with a flag
.name counter
.inputs en
.outputs q0 q1 flag
.flag flag
.reg r0 init=0
.reg r1 init=1
.cycles 3
gate q0 = buf(r0)
gate q1 = buf(r1)
gate n0 = xor(r0, en)
gate t = and(r0, en)
gate n1 = xor(r1, t)
gate flag = const0()
next r0 = n0
next r1 = n1
)";

TEST(Netlist, ParsesAllStatements) {
  NetlistDoc d = parse_netlist(kCounter);
  EXPECT_EQ(d.name, "counter");
  EXPECT_EQ(d.inputs, std::vector<std::string>{"en"});
  EXPECT_EQ(d.outputs, (std::vector<std::string>{"q0", "q1", "flag"}));
  ASSERT_TRUE(d.flag_output);
  EXPECT_EQ(*d.flag_output, "flag");
  ASSERT_EQ(d.registers.size(), 2u);
  EXPECT_FALSE(d.registers[0].init);
  EXPECT_TRUE(d.registers[1].init);
  EXPECT_EQ(d.default_cycles, 3);
  ASSERT_EQ(d.gates.size(), 6u);
  EXPECT_EQ(d.gates[2].kind, GateKind::Xor);
  EXPECT_EQ(d.gates[2].operands, (std::vector<std::string>{"r0", "en"}));
  EXPECT_EQ(d.gates[5].kind, GateKind::Const0);
  EXPECT_TRUE(d.gates[5].operands.empty());
  EXPECT_EQ(d.next_state.at("r1"), "n1");
  EXPECT_TRUE(d.is_register("r0"));
  EXPECT_FALSE(d.is_register("q0"));
  EXPECT_TRUE(d.declares("en"));
  EXPECT_FALSE(d.declares("nope"));
}

TEST(Netlist, WriteThenParseRoundTrips) {
  NetlistDoc d = parse_netlist(kCounter);
  NetlistDoc again = parse_netlist(write_netlist(d));
  EXPECT_EQ(d, again);
  EXPECT_EQ(write_netlist(again), write_netlist(d));
}

TEST(Netlist, RoundTripsFixtures) {
  for (const char* name : {"rect_parity.nl", "rect_revised.nl"}) {
    NetlistDoc d = read_netlist_file(test::fixture(name));
    EXPECT_EQ(parse_netlist(write_netlist(d)), d) << name;
  }
}

TEST(Netlist, AllGateKindsAccepted) {
  NetlistDoc d = parse_netlist(R"(
.name kinds
.inputs a b
.outputs o1 o2 o3 o4 o5 o6 o7 o8 o9 o10
gate o1 = and(a, b)
gate o2 = or(a, b)
gate o3 = nand(a, b)
gate o4 = nor(a, b)
gate o5 = xor(a, b)
gate o6 = xnor(a, b)
gate o7 = not(a)
gate o8 = buf(b)
gate o9 = const1()
gate o10 = const0()
)");
  ASSERT_EQ(d.gates.size(), 10u);
  for (const auto& g : d.gates) EXPECT_EQ(static_cast<int>(g.operands.size()), arity(g.kind)) << g.name;
}

TEST(Netlist, SyntaxErrorsCarryLocation) {
  SourceLoc l = loc_of(".name t\n.inputs a\n.outputs o\ngate o = and(a a)\n");
  EXPECT_EQ(l.line, 4);
  EXPECT_GT(l.col, 0);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = and(a a)\n"), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of(".name t\n.bogus x\n"), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of(".name t\n.reg r init=2\n"), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of(".name t\n.cycles 0\n"), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of(".name t\n.name u\n"), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = buf(a) extra\n"), ErrorCode::SyntaxError);
}

TEST(Netlist, UnknownGateKind) {
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = mux(a, a)\n"), ErrorCode::UnknownGateKind);
}

TEST(Netlist, ArityMismatch) {
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = not(a, a)\n"), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = and(a)\n"), ErrorCode::ArityMismatch);
}

TEST(Netlist, UndefinedNet) {
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = and(a, b)\n"), ErrorCode::UndefinedNet);
  SourceLoc l = loc_of(".name t\n.inputs a\n.outputs o\ngate o = and(a, b)\n");
  EXPECT_EQ(l.line, 4);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = buf(a)\nnext o = a\n"), ErrorCode::UndefinedNet);
}

TEST(Netlist, DuplicateNames) {
  EXPECT_EQ(code_of(".name t\n.inputs a a\n.outputs a\n"), ErrorCode::DuplicateName);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\ngate o = buf(a)\ngate o = not(a)\n"), ErrorCode::DuplicateName);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o o\ngate o = buf(a)\n"), ErrorCode::DuplicateName);
}

TEST(Netlist, MissingDrivers) {
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\n"), ErrorCode::MissingOutputDriver);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\n.reg r init=0\ngate o = buf(r)\n"),
            ErrorCode::MissingOutputDriver);
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\n.flag f\ngate o = buf(a)\n"), ErrorCode::MissingOutputDriver);
}

TEST(Netlist, FlagMustBeAnOutput) {
  EXPECT_EQ(code_of(".name t\n.inputs a\n.outputs o\n.flag f\ngate o = buf(a)\ngate f = not(a)\n"),
            ErrorCode::SyntaxError);
}

TEST(Netlist, MissingFileIsIo) {
  try {
    read_netlist_file("/nonexistent/x.nl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Netlist, ErrorCodeNamesAreDistinct) {
  std::set<std::string> names;
  for (int c = 0; c <= static_cast<int>(ErrorCode::Io); ++c) names.insert(std::string(to_string(static_cast<ErrorCode>(c))));
  EXPECT_EQ(names.size(), static_cast<size_t>(ErrorCode::Io) + 1);
}

}  // namespace
}  // namespace frv
