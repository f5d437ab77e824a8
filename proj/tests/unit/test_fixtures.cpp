#include <gtest/gtest.h>

#include "frv/simulator.hpp"
#include "test_support.hpp"

namespace frv {
namespace {

// RECTANGLE S-box, input 0..15 -> output, w x y z with w most significant.
const int kSbox[16] = {0x6, 0x5, 0xC, 0xA, 0x1, 0xE, 0x7, 0x9, 0xB, 0x0, 0x3, 0xD, 0x8, 0xF, 0x4, 0x2};

std::vector<bool> nibble(int v) { return {(v & 8) != 0, (v & 4) != 0, (v & 2) != 0, (v & 1) != 0}; }

class FixtureSbox : public ::testing::TestWithParam<const char*> {};

TEST_P(FixtureSbox, ComputesTheSboxWithFlagLow) {
  auto c = test::load_fixture(GetParam());
  UnrolledCircuit u = unroll(c, 1);
  for (int x = 0; x < 16; ++x) {
    Trace t = run_trace(u, {nibble(x)});
    EXPECT_EQ(t[0].outputs, nibble(kSbox[x])) << GetParam() << " x=" << x;
    EXPECT_FALSE(t[0].flag) << GetParam() << " x=" << x;
  }
}

TEST_P(FixtureSbox, ReferenceSimulatorAgrees) {
  NetlistDoc d = read_netlist_file(test::fixture(GetParam()));
  for (int x = 0; x < 16; ++x) {
    auto t = test::ref_simulate(d, {nibble(x)});
    std::vector<bool> got = {t[0].at("w"), t[0].at("x"), t[0].at("y"), t[0].at("z")};
    EXPECT_EQ(got, nibble(kSbox[x])) << GetParam() << " x=" << x;
    EXPECT_FALSE(t[0].at("flag"));
  }
}

INSTANTIATE_TEST_SUITE_P(Both, FixtureSbox, ::testing::Values("rect_parity.nl", "rect_revised.nl"));

TEST(Fixtures, ConfigsNameExistingGates) {
  NetlistDoc d = read_netlist_file(test::fixture("rect_parity.nl"));
  for (const char* cfg : {"zeta_1_1_all_c.json", "zeta_1_1_all_c_checker.json"}) {
    std::string text = test::read_text(test::fixture(cfg));
    EXPECT_FALSE(text.empty()) << cfg;
  }
  EXPECT_TRUE(d.find_gate("p6"));
  EXPECT_TRUE(d.find_gate("c3"));
}

}  // namespace
}  // namespace frv
