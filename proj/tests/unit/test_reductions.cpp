#include <gtest/gtest.h>

#include "frv/error.hpp"
#include "frv/oracle.hpp"
#include "frv/reductions.hpp"
#include "test_support.hpp"

namespace frv {
namespace {

FaultResistanceModel model(FaultTypeSet t, Location l, int ne = 1, int nc = 1) {
  FaultResistanceModel m;
  m.ne = ne;
  m.nc = nc;
  m.types = t;
  m.location = l;
  return m;
}

const Blacklist kChecker = {"c1", "c2", "c3", "flag"};

TEST(FaultTypeReduction, CollapsesToBitFlip) {
  using enum FaultType;
  EXPECT_EQ(reduce_fault_types(model(FaultTypeSet::all(), Location::Comb)).model.types, FaultTypeSet{BitFlip});
  EXPECT_EQ(reduce_fault_types(model({Set, BitFlip}, Location::Reg)).model.types, FaultTypeSet{BitFlip});
  auto sr = reduce_fault_types(model({Set, Reset}, Location::Comb));
  EXPECT_EQ(sr.model.types, (FaultTypeSet{Set, Reset}));
  EXPECT_TRUE(sr.note);
  auto s = reduce_fault_types(model({Set}, Location::Comb));
  EXPECT_EQ(s.model.types, FaultTypeSet{Set});
  EXPECT_TRUE(s.note);
}

TEST(Applicability, Conditions) {
  using enum FaultType;
  EXPECT_TRUE(single_successor_applicable(model({BitFlip}, Location::Comb)));
  EXPECT_TRUE(single_successor_applicable(model({Set, Reset}, Location::CombReg)));
  EXPECT_FALSE(single_successor_applicable(model({Set}, Location::Comb)));
  EXPECT_FALSE(single_successor_applicable(model({Reset}, Location::Comb)));
  EXPECT_FALSE(single_successor_applicable(model({BitFlip}, Location::Reg)));
  EXPECT_TRUE(aggressive_applicable(model({BitFlip}, Location::Comb)));
  EXPECT_FALSE(aggressive_applicable(model({Set, Reset}, Location::Comb)));
  EXPECT_FALSE(aggressive_applicable(model(FaultTypeSet::all(), Location::Comb)));
  EXPECT_FALSE(aggressive_applicable(model({BitFlip}, Location::Reg)));
}

TEST(SingleSuccessor, ParityFixture) {
  auto c = test::load_fixture("rect_parity.nl");
  Blacklist got = single_successor_blacklist(*c, kChecker, model(FaultTypeSet::all(), Location::Comb));
  EXPECT_EQ(got, (Blacklist{"s4", "s5", "s7", "s8", "p1", "p2", "p3", "p4", "p5"}));
}

TEST(SingleSuccessor, NotApplicableThrows) {
  auto c = test::load_fixture("rect_parity.nl");
  try {
    single_successor_blacklist(*c, kChecker, model({FaultType::Set}, Location::Comb));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotApplicable);
  }
}

TEST(SingleSuccessor, RegistersBlockMerging) {
  auto c = test::circuit_from(R"(
.name t
.inputs a b
.outputs o
.reg r init=0
gate g = and(a, b)
gate h = not(g)
gate o = xor(r, a)
next r = h
)");
  // h feeds only a register, g feeds only h.
  EXPECT_EQ(single_successor_blacklist(*c, {}, model({FaultType::BitFlip}, Location::Comb)), Blacklist{"g"});
}

TEST(SingleExit, ParityFixtureMap) {
  auto c = test::load_fixture("rect_parity.nl");
  ExitMap em = single_exit_map(*c, kChecker);
  auto named = em.named(*c);
  EXPECT_EQ(named.at("p6"), (std::set<std::string>{"p1", "p2", "p3", "p4", "p5", "p6"}));
  EXPECT_EQ(named.at("x"), (std::set<std::string>{"s8", "x"}));
  EXPECT_EQ(named.at("w"), (std::set<std::string>{"s7", "w"}));
  EXPECT_EQ(named.at("z"), (std::set<std::string>{"s4", "z"}));
  EXPECT_EQ(named.at("s6"), (std::set<std::string>{"s5", "s6"}));
  std::set<std::string> multi = {"p6", "x", "w", "z", "s6"};
  for (const auto& [exit, members] : named) {
    if (!multi.count(exit)) {
      EXPECT_EQ(members, std::set<std::string>{exit}) << exit;
    }
  }
  // Every gate sits in exactly one exit set.
  size_t total = 0;
  for (const auto& [exit, members] : named) total += members.size();
  EXPECT_EQ(total, c->gates().size() + c->registers().size());
}

TEST(SingleExit, AggressiveBlacklist) {
  auto c = test::load_fixture("rect_parity.nl");
  ExitMap em = single_exit_map(*c, kChecker);
  Blacklist got = aggressive_blacklist(*c, em, kChecker, model({FaultType::BitFlip}, Location::Comb));
  EXPECT_EQ(got, (Blacklist{"p1", "p2", "p3", "p4", "p5", "s8", "s7", "s4", "s5"}));
  EXPECT_THROW(aggressive_blacklist(*c, em, kChecker, model(FaultTypeSet::all(), Location::Comb)), Error);
}

// Property: exit sets partition the gates, every member reaches its exit,
// and the work done is linear in gates plus edges.
TEST(SingleExit, PartitionPropertyOnRandomCircuits) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    GeneratedInstance gi = random_netlist(seed);
    SequentialCircuit c = build_and_validate(gi.netlist);
    ExitMap em = single_exit_map(c, gi.suggested_blacklist);
    std::map<NetId, int> seen;
    size_t edges = 0;
    for (NetId g : c.gates()) edges += c.net(g).operands.size();
    for (const auto& [exit, members] : em.m2) {
      EXPECT_TRUE(members.count(exit));
      for (NetId m : members) {
        ++seen[m];
        ASSERT_TRUE(em.m1[m]);
        EXPECT_EQ(*em.m1[m], exit);
        if (m != exit) {
          EXPECT_EQ(c.net(m).kind, NetKind::Gate);
          // A non-exit member has no consumers outside its exit set.
          const auto& fo = c.fanout(m);
          EXPECT_TRUE(fo.output_ports.empty());
          EXPECT_TRUE(fo.registers.empty());
          for (NetId s : fo.gates) EXPECT_TRUE(members.count(s)) << c.net(m).name;
        }
      }
    }
    for (NetId g : c.gates()) EXPECT_EQ(seen[g], 1) << "seed " << seed;
    for (NetId r : c.registers()) {
      EXPECT_EQ(em.m2.at(r), std::set<NetId>{r});
    }
    EXPECT_LE(em.visits, 2 * (c.gates().size() + c.registers().size() + edges) + 1);
  }
}

TEST(Plan, DefaultFlagsOnParityFixture) {
  auto c = test::load_fixture("rect_parity.nl");
  ReductionPlan p = plan_reductions(*c, kChecker, model(FaultTypeSet::all(), Location::Comb), ReductionFlags{});
  EXPECT_EQ(p.effective_model.types, FaultTypeSet{FaultType::BitFlip});
  ASSERT_EQ(p.applied.size(), 2u);
  EXPECT_EQ(p.applied[0].name, "fault_type");
  EXPECT_EQ(p.applied[0].removed, (std::vector<std::string>{"s", "r"}));
  EXPECT_EQ(p.applied[1].name, "single_successor");
  EXPECT_EQ(p.applied[1].removed.size(), 9u);
  EXPECT_EQ(p.effective_blacklist.size(), 13u);
  EXPECT_TRUE(p.skipped.empty());
}

TEST(Plan, AggressiveSubsumesSingleSuccessor) {
  auto c = test::load_fixture("rect_parity.nl");
  ReductionFlags f;
  f.single_exit = true;
  ReductionPlan p = plan_reductions(*c, kChecker, model(FaultTypeSet::all(), Location::Comb), f);
  ASSERT_EQ(p.applied.size(), 2u);
  EXPECT_EQ(p.applied[1].name, "single_exit");
  ASSERT_EQ(p.skipped.size(), 1u);
  EXPECT_EQ(p.skipped[0].name, "single_successor");
}

TEST(Plan, SkipsWhatCannotRun) {
  auto c = test::load_fixture("rect_parity.nl");
  ReductionFlags f;
  f.single_exit = true;
  ReductionPlan p = plan_reductions(*c, kChecker, model({FaultType::Set}, Location::Comb), f);
  EXPECT_TRUE(p.applied.empty());
  EXPECT_EQ(p.effective_blacklist, kChecker);
  EXPECT_EQ(p.skipped.size(), 3u);
}

TEST(Plan, AllOff) {
  auto c = test::load_fixture("rect_parity.nl");
  ReductionFlags f{false, false, false};
  ReductionPlan p = plan_reductions(*c, kChecker, model(FaultTypeSet::all(), Location::Comb), f);
  EXPECT_TRUE(p.applied.empty());
  EXPECT_TRUE(p.skipped.empty());
  EXPECT_EQ(p.effective_model.types, FaultTypeSet::all());
  EXPECT_EQ(p.effective_blacklist, kChecker);
}

}  // namespace
}  // namespace frv
