#include <gtest/gtest.h>

#include <random>

#include "frv/error.hpp"
#include "frv/oracle.hpp"
#include "frv/simulator.hpp"
#include "test_support.hpp"

namespace frv {
namespace {

const char* kSeq = R"(
.name seq
.inputs a b
.outputs o flag
.flag flag
.reg r init=1
gate g1 = and(a, r)
gate o = xor(g1, b)
gate flag = and(o, b)
next r = o
)";

FaultVector fv(const SequentialCircuit& c, std::vector<std::pair<std::string, FaultType>> ev) {
  std::vector<FaultEvent> events;
  for (auto& [name, t] : ev) events.push_back({parse_instance(c, name), t});
  return FaultVector(events);
}

TEST(FaultVector, SortedAndCounted) {
  auto c = test::circuit_from(kSeq);
  FaultVector v = fv(*c, {{"o@2", FaultType::Set}, {"g1@1", FaultType::Reset}, {"r@2", FaultType::BitFlip}});
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.sharp_clk(), 2);
  EXPECT_EQ(v.max_epc(), 2);
  EXPECT_EQ(v.events()[0].instance.cycle, 1);
  EXPECT_EQ(describe(*c, v), "{e(1, g1, r), e(2, r, bf), e(2, o, s)}");
  FaultVector w = fv(*c, {{"r@2", FaultType::BitFlip}, {"o@2", FaultType::Set}, {"g1@1", FaultType::Reset}});
  EXPECT_EQ(v, w);
  try {
    fv(*c, {{"o@1", FaultType::Set}, {"o@1", FaultType::Reset}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateInstance);
  }
}

TEST(Simulator, GoldenTraceMatchesHandComputation) {
  auto c = test::circuit_from(kSeq);
  UnrolledCircuit u = unroll(c, 3);
  // r=1: a=1,b=0 -> g1=1, o=1, flag=0; r=1: a=0,b=1 -> o=1, flag=1; r=1: a=1,b=1 -> o=0.
  Trace t = run_trace(u, {test::bits_of("10"), test::bits_of("01"), test::bits_of("11")});
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].outputs, test::bits_of("1"));
  EXPECT_FALSE(t[0].flag);
  EXPECT_EQ(t[0].state, test::bits_of("1"));
  EXPECT_EQ(t[1].outputs, test::bits_of("1"));
  EXPECT_TRUE(t[1].flag);
  EXPECT_EQ(t[2].outputs, test::bits_of("0"));
  EXPECT_EQ(t[2].state, test::bits_of("0"));
}

TEST(Simulator, ShapeMismatch) {
  auto c = test::circuit_from(kSeq);
  UnrolledCircuit u = unroll(c, 2);
  EXPECT_THROW(run_trace(u, {test::bits_of("10")}), Error);
  EXPECT_THROW(run_trace(u, {test::bits_of("10"), test::bits_of("1")}), Error);
  EXPECT_THROW(parse_bits("01x"), Error);
  EXPECT_EQ(format_bits(parse_bits("0110")), "0110");
}

TEST(Simulator, FaultsOnlyTouchTheirInstance) {
  auto c = test::circuit_from(kSeq);
  UnrolledCircuit u = unroll(c, 2);
  InputSequence in = {test::bits_of("10"), test::bits_of("10")};
  Trace g = run_trace(u, in);
  // Flipping o in cycle 2 leaves cycle 1 alone.
  Trace f = run_trace(apply_fault_vector(u, fv(*c, {{"o@2", FaultType::BitFlip}})), in);
  EXPECT_EQ(f[0].outputs, g[0].outputs);
  EXPECT_NE(f[1].outputs, g[1].outputs);
  // Resetting the register read in cycle 1 drives g1 low.
  Trace r = run_trace(apply_fault_vector(u, fv(*c, {{"r@1", FaultType::Reset}})), in);
  EXPECT_EQ(r[0].outputs, test::bits_of("0"));
}

TEST(Simulator, EffectivenessRespectsFlagTiming) {
  auto c = test::circuit_from(kSeq);
  UnrolledCircuit u = unroll(c, 1);
  // b=1 raises the flag whenever o=1.
  auto v = fv(*c, {{"g1@1", FaultType::BitFlip}});
  // a=0,b=1: golden o=1, flag=1; faulty g1=1, o=0, flag=0 -> effective.
  auto e1 = check_effectiveness(u, v, {test::bits_of("01")});
  EXPECT_TRUE(e1.effective);
  EXPECT_EQ(e1.divergence_cycle, 1);
  EXPECT_EQ(e1.differing_output, "o");
  // a=1,b=1: golden o=0; faulty g1=0, o=1, flag=1 -> caught in the same cycle.
  EXPECT_FALSE(check_effectiveness(u, v, {test::bits_of("11")}).effective);
  EXPECT_THROW(check_effectiveness(u, FaultVector{}, {test::bits_of("11")}), Error);
}

TEST(Simulator, FindWitnessIsLexicographicallyFirst) {
  auto c = test::circuit_from(kSeq);
  UnrolledCircuit u = unroll(c, 1);
  auto w = find_witness(u, fv(*c, {{"g1@1", FaultType::BitFlip}}));
  ASSERT_TRUE(w);
  EXPECT_EQ(format_bits((*w)[0]), "00");
  auto none = find_witness(u, fv(*c, {{"flag@1", FaultType::BitFlip}}));
  EXPECT_FALSE(none);
}

// Property: the node-level simulator, the word-parallel simulator and the
// name-level reference agree on random circuits, inputs and faults.
TEST(Simulator, AgreesWithReferenceOnRandomCircuits) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratedInstance gi = random_netlist(seed);
    auto c = std::make_shared<const SequentialCircuit>(build_and_validate(gi.netlist));
    int k = 1 + static_cast<int>(seed % 3);
    UnrolledCircuit u = unroll(c, k);
    auto inst = u.instances();
    for (int trial = 0; trial < 8; ++trial) {
      InputSequence in(k, Bits(c->inputs().size()));
      for (auto& cyc : in) {
        for (size_t i = 0; i < cyc.size(); ++i) cyc[i] = rng() & 1;
      }
      std::map<std::string, std::string> names;
      std::vector<FaultEvent> events;
      int n = static_cast<int>(rng() % 3) + 1;
      for (int i = 0; i < n; ++i) {
        const GateInstance& gi2 = inst[rng() % inst.size()];
        std::string key = instance_name(*c, gi2);
        if (names.count(key)) continue;
        auto t = static_cast<FaultType>(rng() % 3);
        names[key] = std::string(to_string(t));
        events.push_back({gi2, t});
      }
      FaultVector v(events);
      auto golden_ref = test::ref_simulate(gi.netlist, in);
      auto faulty_ref = test::ref_simulate(gi.netlist, in, names);
      Trace g = run_trace(u, in);
      Trace f = run_trace(apply_fault_vector(u, v), in);
      for (int cyc = 0; cyc < k; ++cyc) {
        for (size_t o = 0; o < c->data_outputs().size(); ++o) {
          const std::string& name = c->outputs()[c->data_outputs()[o]].name;
          ASSERT_EQ(g[cyc].outputs[o], golden_ref[cyc].at(name)) << "seed " << seed;
          ASSERT_EQ(f[cyc].outputs[o], faulty_ref[cyc].at(name)) << "seed " << seed;
        }
      }
      EXPECT_EQ(check_effectiveness(u, v, in).effective, test::ref_effective(gi.netlist, golden_ref, faulty_ref))
          << "seed " << seed;

      // Word simulator: lane 0 carries this input sequence, the others zeros.
      InputWords words(k, std::vector<std::uint64_t>(c->inputs().size(), 0));
      for (int cyc = 0; cyc < k; ++cyc) {
        for (size_t i = 0; i < c->inputs().size(); ++i) words[cyc][i] = in[cyc][i] ? 1 : 0;
      }
      WordSimulator ws(u);
      WordTrace wg, wf;
      ws.run(words, {}, wg);
      auto nf = node_faults(u, v);
      ws.run(words, nf, wf);
      bool lane0 = (effective_lanes(wg, wf) & 1) != 0;
      EXPECT_EQ(lane0, check_effectiveness(u, v, in).effective) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace frv
