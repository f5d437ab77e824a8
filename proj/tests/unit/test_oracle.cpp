#include <gtest/gtest.h>

#include <random>
#include <set>

#include "frv/error.hpp"
#include "frv/oracle.hpp"
#include "frv/verify.hpp"
#include "test_support.hpp"

namespace frv {
namespace {

FaultResistanceModel model(int ne, int nc, FaultTypeSet t, Location l) {
  FaultResistanceModel m;
  m.ne = ne;
  m.nc = nc;
  m.types = t;
  m.location = l;
  return m;
}

// Closed-form count: choose up to nc cycles, in each a non-empty set of at
// most ne locations, each with one of |T| types.
std::uint64_t closed_form(const std::vector<int>& per_cycle, int ne, int nc, int t) {
  auto binom = [](int n, int k) -> std::uint64_t {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  // ways[c] = non-empty choices in cycle c.
  std::vector<std::uint64_t> ways;
  for (int n : per_cycle) {
    std::uint64_t w = 0, tp = 1;
    for (int j = 1; j <= ne; ++j) {
      tp *= t;
      w += binom(n, j) * tp;
    }
    ways.push_back(w);
  }
  // Sum over subsets of cycles of size 1..nc of the product of ways.
  std::vector<std::uint64_t> dp(nc + 1, 0);
  dp[0] = 1;
  for (std::uint64_t w : ways) {
    for (int j = nc; j >= 1; --j) dp[j] += dp[j - 1] * w;
  }
  std::uint64_t total = 0;
  for (int j = 1; j <= nc; ++j) total += dp[j];
  return total;
}

TEST(Enumeration, CountsMatchClosedFormAndEnumeration) {
  auto c = test::circuit_from(R"(
.name t
.inputs a b
.outputs o
.reg r init=0
gate g1 = and(a, b)
gate g2 = xor(g1, r)
gate o = not(g2)
next r = o
)");
  for (int k = 1; k <= 3; ++k) {
    UnrolledCircuit u = unroll(c, k);
    for (int ne = 1; ne <= 3; ++ne) {
      for (int nc = 1; nc <= 3; ++nc) {
        for (FaultTypeSet t : {FaultTypeSet{FaultType::BitFlip}, FaultTypeSet{FaultType::Set, FaultType::Reset},
                               FaultTypeSet::all()}) {
          for (Location l : {Location::Comb, Location::Reg, Location::CombReg}) {
            auto m = model(ne, nc, t, l);
            auto locs = fault_locations(u, {}, l);
            std::vector<int> per_cycle(k, 0);
            for (const auto& x : locs) ++per_cycle[x.cycle - 1];
            std::uint64_t want = closed_form(per_cycle, ne, nc, t.size());
            EXPECT_EQ(count_fault_vectors(*c, locs, m), want);
            if (want > 200000) continue;
            std::uint64_t seen = 0;
            std::set<std::string> distinct;
            enumerate_fault_vectors(*c, locs, m, {}, [&](const FaultVector& v) {
              ++seen;
              EXPECT_FALSE(v.empty());
              EXPECT_LE(v.max_epc(), ne);
              EXPECT_LE(v.sharp_clk(), nc);
              for (const auto& e : v.events()) EXPECT_TRUE(t.contains(e.type));
              distinct.insert(describe(*c, v));
              return true;
            });
            EXPECT_EQ(seen, want);
            EXPECT_EQ(distinct.size(), want);
          }
        }
      }
    }
  }
}

TEST(Enumeration, StopsEarlyAndRespectsBudget) {
  auto c = test::load_fixture("rect_parity.nl");
  UnrolledCircuit u = unroll(c, 1);
  auto locs = fault_locations(u, {}, Location::Comb);
  auto m = model(1, 1, FaultTypeSet::all(), Location::Comb);
  EXPECT_EQ(count_fault_vectors(*c, locs, m), 66u);
  int n = 0;
  enumerate_fault_vectors(*c, locs, m, {}, [&](const FaultVector&) { return ++n < 5; });
  EXPECT_EQ(n, 5);
  OracleBudget tiny;
  tiny.max_vectors = 10;
  try {
    enumerate_fault_vectors(*c, locs, m, tiny, [](const FaultVector&) { return true; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  // Saturation instead of overflow.
  auto big = model(22, 1, FaultTypeSet::all(), Location::Comb);
  UnrolledCircuit u40 = unroll(c, 40);
  big.nc = 40;
  EXPECT_EQ(count_fault_vectors(*c, fault_locations(u40, {}, Location::Comb), big), UINT64_MAX);
}

TEST(Enumeration, OrderIsCycleThenName) {
  auto c = test::circuit_from(".name t\n.inputs a\n.outputs o\ngate zz = not(a)\ngate o = buf(zz)\n");
  UnrolledCircuit u = unroll(c, 2);
  std::vector<std::string> got;
  enumerate_fault_vectors(*c, fault_locations(u, {}, Location::Comb), model(1, 1, {FaultType::Set, FaultType::BitFlip}, Location::Comb), {},
                          [&](const FaultVector& v) {
                            got.push_back(describe(*c, v));
                            return true;
                          });
  EXPECT_EQ(got, (std::vector<std::string>{"{e(1, o, s)}", "{e(1, o, bf)}", "{e(1, zz, s)}", "{e(1, zz, bf)}",
                                           "{e(2, o, s)}", "{e(2, o, bf)}", "{e(2, zz, s)}", "{e(2, zz, bf)}"}));
}

TEST(Witnesses, SetFaultOnZGate) {
  auto c = test::load_fixture("rect_parity.nl");
  UnrolledCircuit u = unroll(c, 1);
  FaultVector v({{parse_instance(*c, "z@1"), FaultType::Set}});
  std::vector<std::string> got;
  for (const auto& in : effective_witnesses(u, v)) got.push_back(format_bits(in[0]));
  EXPECT_EQ(got, (std::vector<std::string>{"0000", "1001", "1110", "1111"}));
}

TEST(BruteForce, Fixtures) {
  auto p = test::load_fixture("rect_parity.nl");
  auto r = test::load_fixture("rect_revised.nl");
  auto m = model(1, 1, FaultTypeSet::all(), Location::Comb);
  Blacklist b = {"p1", "p2", "p3", "p4", "p5", "p6", "c1", "c2", "c3", "flag"};
  OracleVerdict vp = brute_force_verdict(unroll(p, 1), b, m);
  EXPECT_FALSE(vp.resistant);
  ASSERT_TRUE(vp.vector && vp.inputs);
  EXPECT_TRUE(check_effectiveness(unroll(p, 1), *vp.vector, *vp.inputs).effective);
  OracleVerdict vr = brute_force_verdict(unroll(r, 1), b, m);
  EXPECT_TRUE(vr.resistant);
  EXPECT_EQ(vr.vectors_checked, count_fault_vectors(*r, fault_locations(unroll(r, 1), b, Location::Comb), m));
  OracleBudget tiny;
  tiny.max_input_bits = 3;
  EXPECT_THROW(brute_force_verdict(unroll(p, 1), b, m, tiny), Error);
}

Cnf cnf_of(int n, std::vector<Clause> clauses) {
  Cnf c;
  for (int i = 0; i < n; ++i) c.new_var(CnfRole::Tseitin);
  c.clauses = std::move(clauses);
  return c;
}

TEST(NpInstance, ShapeAndExpectation) {
  Cnf sat = cnf_of(2, {{1, 2}, {-1}});
  GeneratedInstance g = np_hardness_instance(sat, 1);
  ASSERT_TRUE(g.expected_resistant);
  EXPECT_FALSE(*g.expected_resistant);
  EXPECT_TRUE(g.suggested_blacklist.empty());
  EXPECT_EQ(g.netlist.default_cycles, 3);
  EXPECT_EQ(g.netlist.inputs.size(), 2u);
  EXPECT_EQ(g.netlist.registers.size(), 6u);
  SequentialCircuit c = build_and_validate(g.netlist);
  EXPECT_TRUE(c.flag_index());
  Cnf unsat = cnf_of(1, {{1}, {-1}});
  EXPECT_TRUE(*np_hardness_instance(unsat, 2).expected_resistant);
  EXPECT_THROW(np_hardness_instance(cnf_of(9, {{1}}), 1), Error);
}

// Golden runs of the generated instance never raise the flag.
TEST(NpInstance, GoldenFlagStaysLow) {
  Cnf phi = cnf_of(3, {{1, -2}, {2, 3}, {-1, -3}});
  GeneratedInstance g = np_hardness_instance(phi, 2);
  for (unsigned a = 0; a < 8; ++a) {
    std::vector<bool> in;
    for (int i = 0; i < 3; ++i) in.push_back((a >> i) & 1);
    auto t = test::ref_simulate(g.netlist, {in, in, in});
    for (const auto& cyc : t) EXPECT_FALSE(cyc.at(*g.netlist.flag_output));
  }
}

TEST(NpInstance, VerifyAgreesWithTruthTable) {
  std::mt19937 rng(29);
  for (int i = 0; i < 6; ++i) {
    std::vector<Clause> cl;
    int m = 2 + rng() % 6;
    for (int j = 0; j < m; ++j) {
      Clause c;
      for (int l = 0; l < 2; ++l) {
        int v = 1 + rng() % 2;
        c.push_back(rng() % 2 ? v : -v);
      }
      cl.push_back(c);
    }
    Cnf phi = cnf_of(2, cl);
    GeneratedInstance g = np_hardness_instance(phi, 1);
    auto c = std::make_shared<const SequentialCircuit>(build_and_validate(g.netlist));
    VerificationConfig cfg;
    cfg.unroll_k = 3;
    cfg.model = model(1, 1, {FaultType::BitFlip}, Location::Reg);
    bool resistant = verify(c, cfg).verdict == Verdict::Resistant;
    EXPECT_EQ(resistant, !test::truth_table_sat(2, cl)) << "instance " << i;
  }
}

TEST(RandomNetlist, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GeneratedInstance a = random_netlist(seed);
    GeneratedInstance b = random_netlist(seed);
    EXPECT_EQ(a.netlist, b.netlist);
    SequentialCircuit c = build_and_validate(a.netlist);
    EXPECT_LE(c.gates().size(), 15u);
    EXPECT_LE(c.registers().size(), 2u);
    EXPECT_TRUE(c.flag_index());
    EXPECT_FALSE(c.data_outputs().empty());
    validate_blacklist(c, a.suggested_blacklist);
  }
  RandomParams p;
  p.with_flag = false;
  SequentialCircuit c = build_and_validate(random_netlist(1, p).netlist);
  EXPECT_FALSE(c.flag_index());
}

}  // namespace
}  // namespace frv
