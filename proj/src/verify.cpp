#include "frv/verify.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>

namespace frv {

std::string_view to_string(Verdict v) { return v == Verdict::Resistant ? "Resistant" : "NotResistant"; }

namespace {

// Refs for every node of `c`; inputs come from `input_ref`, and nodes with a
// control entry in `cc` are expanded through their gadget.
std::vector<Ref> circuit_refs(Formula& f, const UnrolledCircuit& c, const ControlledCircuit* cc,
                              const std::vector<Ref>& control_c, const std::vector<Ref>& control_b1,
                              const std::vector<Ref>& control_b2,
                              const std::function<Ref(const Node&)>& input_ref) {
  std::vector<Ref> val(c.nodes().size());
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& n = c.node(id);
    if (n.role == NodeRole::Input) {
      val[id] = input_ref(n);
      continue;
    }
    Ref a = n.arity > 0 ? val[n.operands[0]] : Formula::False();
    Ref b = n.arity > 1 ? val[n.operands[1]] : Formula::False();
    std::optional<size_t> ci = cc ? cc->control_of(id) : std::nullopt;
    if (!ci) {
      val[id] = f.mk_gate(n.fn, a, b);
      continue;
    }
    const Gadget& g = cc->gadget_for(cc->controls()[*ci].original);
    std::function<Ref(int)> build = [&](int at) -> Ref {
      const Gadget::Node& gn = g.nodes[at];
      if (!gn.is_ite) return f.mk_gate(gn.fn, a, b);
      Ref sel = gn.cond == ControlLeaf::C ? control_c[*ci] : gn.cond == ControlLeaf::B1 ? control_b1[*ci] : control_b2[*ci];
      return f.mk_ite(sel, build(gn.then_node), build(gn.else_node));
    };
    val[id] = build(g.root);
  }
  return val;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

FrFormula build_fr_formula(const UnrolledCircuit& golden, const ControlledCircuit& cc,
                           const FaultResistanceModel& model, bool require_fault) {
  const UnrolledCircuit& faulty = cc.base();
  const SequentialCircuit& pf = faulty.frame();
  const SequentialCircuit& gf = golden.frame();
  if (golden.k() != faulty.k()) throw Error(ErrorCode::ShapeMismatch, "golden and protected cycle counts differ");
  const int k = faulty.k();

  FrFormula fr;
  Formula& f = fr.f;

  fr.inputs.assign(k, {});
  for (int cycle = 1; cycle <= k; ++cycle) {
    for (NetId in : pf.inputs()) fr.inputs[cycle - 1].push_back(f.var(pf.net(in).name + "@" + std::to_string(cycle), VarRole::PrimaryInput));
  }
  std::map<std::string, size_t> input_slot;
  for (size_t i = 0; i < pf.inputs().size(); ++i) input_slot[pf.net(pf.inputs()[i]).name] = i;
  if (gf.inputs().size() != pf.inputs().size()) throw Error(ErrorCode::ShapeMismatch, "golden and protected inputs differ");
  for (NetId in : gf.inputs()) {
    if (!input_slot.count(gf.net(in).name)) {
      throw Error(ErrorCode::ShapeMismatch, "golden input '" + gf.net(in).name + "' is not an input of the protected circuit");
    }
  }

  const auto& controls = cc.controls();
  std::vector<Ref> cvar, b1var(controls.size(), Formula::False()), b2var(controls.size(), Formula::False());
  for (const auto& e : controls) {
    cvar.push_back(f.var(e.c, VarRole::Control));
    fr.control_names.push_back(e.c);
  }
  for (size_t i = 0; i < controls.size(); ++i) {
    if (controls[i].b1) {
      b1var[i] = f.var(*controls[i].b1, VarRole::Selection);
      fr.control_names.push_back(*controls[i].b1);
    }
    if (controls[i].b2) {
      b2var[i] = f.var(*controls[i].b2, VarRole::Selection);
      fr.control_names.push_back(*controls[i].b2);
    }
  }
  fr.controls = cvar;

  auto input_of = [&](const UnrolledCircuit& c) {
    return [&fr, &input_slot, &c](const Node& n) {
      return fr.inputs[n.cycle - 1][input_slot.at(c.frame().net(n.net).name)];
    };
  };
  auto gval = circuit_refs(f, golden, nullptr, {}, {}, {}, input_of(golden));
  auto cval = circuit_refs(f, faulty, &cc, cvar, b1var, b2var, input_of(faulty));

  std::vector<Ref> conj;

  // At most nc active cycles.
  if (model.nc < k) {
    std::vector<Ref> d;
    for (int cycle = 1; cycle <= k; ++cycle) {
      Ref di = f.var("d@" + std::to_string(cycle), VarRole::CycleActive);
      std::vector<Ref> group;
      for (size_t idx : cc.cycle_groups()[cycle - 1]) group.push_back(cvar[idx]);
      conj.push_back(f.mk_iff(di, f.mk_or(group)));
      d.push_back(di);
    }
    fr.bounds.push_back({d, model.nc});
    fr.has_nc_bound = true;
  }
  // At most ne events per cycle.
  for (int cycle = 1; cycle <= k; ++cycle) {
    const auto& group = cc.cycle_groups()[cycle - 1];
    if (static_cast<int>(group.size()) <= model.ne) continue;
    std::vector<Ref> vars;
    for (size_t idx : group) vars.push_back(cvar[idx]);
    fr.bounds.push_back({vars, model.ne});
    fr.has_ne_bound = true;
  }

  std::map<std::string, size_t> golden_port;
  for (size_t p : gf.data_outputs()) golden_port[gf.outputs()[p].name] = p;

  std::vector<Ref> effective;
  std::vector<Ref> unflagged;
  for (int cycle = 1; cycle <= k; ++cycle) {
    std::vector<Ref> diff;
    for (size_t p : pf.data_outputs()) {
      const std::string& name = pf.outputs()[p].name;
      auto it = golden_port.find(name);
      if (it == golden_port.end()) throw Error(ErrorCode::ShapeMismatch, "golden circuit has no output '" + name + "'");
      diff.push_back(f.mk_xor(gval[golden.output_node(it->second, cycle)], cval[faulty.output_node(p, cycle)]));
    }
    if (auto fi = pf.flag_index()) unflagged.push_back(~cval[faulty.output_node(*fi, cycle)]);
    std::vector<Ref> term = unflagged;
    term.push_back(f.mk_or(diff));
    effective.push_back(f.mk_and(term));
  }
  conj.push_back(f.mk_or(effective));
  if (require_fault) conj.push_back(f.mk_or(cvar));
  fr.root = f.mk_and(conj);
  return fr;
}

EncodedProblem encode(const FrFormula& fr) {
  auto t = tseitin_cnf(fr.f, fr.root);
  EncodedProblem out{std::move(t.cnf), std::move(t.var_index)};
  for (const auto& b : fr.bounds) {
    std::vector<int> lits;
    for (Ref r : b.vars) lits.push_back(out.var_index[fr.f.node(r).var]);
    auto clauses = at_most_k(lits, b.k, out.cnf);
    out.cnf.clauses.insert(out.cnf.clauses.end(), clauses.begin(), clauses.end());
  }
  return out;
}

PreparedProblem prepare(std::shared_ptr<const SequentialCircuit> circuit, const VerificationConfig& config) {
  validate_blacklist(*circuit, config.blacklist);
  UnrolledCircuit unrolled = unroll(circuit, config.unroll_k);
  ReductionPlan plan = plan_reductions(*circuit, config.blacklist, config.model, config.reductions);
  auto locations = fault_locations(unrolled, plan.effective_blacklist, plan.effective_model.location);
  ControlledCircuit cc = instrument(unrolled, locations, plan.effective_model.types);
  return {std::move(unrolled), std::move(plan), std::move(cc)};
}

VerifyResult verify(std::shared_ptr<const SequentialCircuit> circuit, const VerificationConfig& config,
                    const VerifyOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  PreparedProblem p = prepare(circuit, config);
  UnrolledCircuit golden = options.golden ? unroll(options.golden, config.unroll_k) : p.unrolled;

  FrFormula fr = build_fr_formula(golden, p.controlled, p.plan.effective_model, options.golden != nullptr);
  EncodedProblem enc = encode(fr);

  VerifyResult result;
  result.plan = p.plan;
  result.stats.vars = enc.cnf.num_vars;
  result.stats.clauses = enc.cnf.clauses.size();
  result.stats.locations = p.controlled.controls().size();

  if (!options.dimacs_path.empty()) {
    std::ofstream out(options.dimacs_path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + options.dimacs_path + "'");
    out << emit_dimacs(enc.cnf);
  }
  if (!options.sidecar_path.empty()) {
    std::ofstream out(options.sidecar_path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + options.sidecar_path + "'");
    out << dimacs_sidecar(enc.cnf);
  }
  result.stats.encode_ms = ms_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  SatResult sat = solve_cnf(enc.cnf, config.solver);
  result.stats.solve_ms = ms_since(t1);

  if (sat.status == SatStatus::Unknown) throw Error(ErrorCode::SolverUnknown, "solver gave no answer: " + sat.reason);
  if (sat.status == SatStatus::Unsat) {
    result.verdict = Verdict::Resistant;
    return result;
  }

  const auto& vars = fr.f.vars();
  ControlAssignment assignment;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].role == VarRole::Control || vars[i].role == VarRole::Selection) {
      assignment[vars[i].name] = sat.model[enc.var_index[i]];
    }
  }
  Counterexample cex;
  cex.vector = decode_fault_vector(assignment, p.controlled);
  cex.inputs.assign(config.unroll_k, Bits{});
  for (int cycle = 0; cycle < config.unroll_k; ++cycle) {
    for (Ref r : fr.inputs[cycle]) cex.inputs[cycle].push_back(sat.model[enc.var_index[fr.f.node(r).var]]);
  }
  if (cex.vector.empty()) {
    throw Error(ErrorCode::InternalEncodingError, "satisfying assignment decodes to the empty fault vector");
  }
  auto replay = check_effectiveness(golden, p.unrolled, cex.vector, cex.inputs);
  if (!replay.effective) {
    throw Error(ErrorCode::InternalEncodingError,
                "simulator does not confirm counterexample " + describe(*circuit, cex.vector));
  }
  cex.divergence_cycle = *replay.divergence_cycle;
  cex.differing_output = *replay.differing_output;
  result.verdict = Verdict::NotResistant;
  result.counterexample = std::move(cex);
  return result;
}

}  // namespace frv
