#include "frv/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "frv/cnf.hpp"
#include "frv/config.hpp"
#include "frv/fault_encoder.hpp"
#include "frv/netlist.hpp"
#include "frv/oracle.hpp"
#include "frv/reductions.hpp"
#include "frv/report.hpp"
#include "frv/sat_solver.hpp"
#include "frv/simulator.hpp"
#include "frv/verify.hpp"

namespace frv {

namespace {

struct Loaded {
  NetlistDoc doc;
  std::shared_ptr<const SequentialCircuit> circuit;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.doc = read_netlist_file(path);
  l.circuit = std::make_shared<const SequentialCircuit>(build_and_validate(l.doc));
  return l;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << text;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

SolverBackend backend_from(const std::string& text) {
  SolverBackend b;
  if (text != "builtin") b.command = split_words(text);
  return b;
}

// Options shared by verify, reduce, encode and oracle.
struct CommonOpts {
  std::string netlist;
  std::string config;
  std::string solver;
  bool no_reduce_types = false;
  bool no_reduce_gates = false;
  bool aggressive = false;

  void attach(CLI::App* sub) {
    sub->add_option("netlist", netlist, "Netlist file")->required();
    sub->add_option("--config", config, "Verification config (JSON)")->required();
    sub->add_flag("--no-reduce-types", no_reduce_types, "Keep the fault-type set as given");
    sub->add_flag("--no-reduce-gates", no_reduce_gates, "Skip blacklist-growing reductions");
    sub->add_flag("--aggressive", aggressive, "Use single-exit sub-circuits when T reduces to {bf}");
  }

  VerificationConfig resolve(const NetlistDoc& doc) const {
    VerificationConfig cfg = read_config_file(config, doc);
    if (no_reduce_types) cfg.reductions.fault_type = false;
    if (no_reduce_gates) {
      cfg.reductions.single_successor = false;
      cfg.reductions.single_exit = false;
    }
    if (aggressive && !no_reduce_gates) cfg.reductions.single_exit = true;
    if (!solver.empty()) {
      cfg.solver = backend_from(solver);
    } else if (!cfg.solver_given) {
      if (const char* env = std::getenv("FRV_SOLVER"); env && *env) cfg.solver = backend_from(env);
    }
    return cfg;
  }
};

void print_plan(const ReductionPlan& plan, std::ostream& out) {
  for (const auto& a : plan.applied) {
    out << "  reduction " << a.name << ": " << a.removed.size() << (a.name == "fault_type" ? " type(s)" : " gate(s)")
        << " removed\n";
  }
  for (const auto& s : plan.skipped) out << "  reduction " << s.name << " skipped: " << s.reason << "\n";
}

void print_counterexample(const SequentialCircuit& frame, const FaultVector& v, const InputSequence& inputs,
                          std::ostream& out) {
  out << "  fault vector: " << describe(frame, v) << "\n";
  out << "  inputs:";
  for (const auto& bits : inputs) out << " " << format_bits(bits);
  out << "\n";
}

int cmd_verify(const CommonOpts& o, const std::string& golden, const std::string& json, const std::string& dimacs,
               std::ostream& out) {
  Loaded l = load(o.netlist);
  VerificationConfig cfg = o.resolve(l.doc);
  VerifyOptions opts;
  if (!golden.empty()) opts.golden = load(golden).circuit;
  opts.dimacs_path = dimacs;
  if (!dimacs.empty()) opts.sidecar_path = dimacs + ".map.json";

  VerifyResult r = verify(l.circuit, cfg, opts);
  out << "circuit " << l.circuit->name() << ", k = " << cfg.unroll_k << ", model " << describe(cfg.model) << "\n";
  print_plan(r.plan, out);
  out << "  effective model " << describe(r.plan.effective_model) << ", " << r.stats.locations
      << " fault locations, " << r.stats.vars << " vars, " << r.stats.clauses << " clauses\n";
  out << "verdict: " << to_string(r.verdict) << "\n";
  if (r.counterexample) {
    print_counterexample(*l.circuit, r.counterexample->vector, r.counterexample->inputs, out);
    out << "  diverges at cycle " << r.counterexample->divergence_cycle << " on output "
        << r.counterexample->differing_output << "\n";
  }
  if (!json.empty()) write_file(json, verify_report_json(*l.circuit, cfg, r), out);
  return r.verdict == Verdict::Resistant ? kExitResistant : kExitNotResistant;
}

int cmd_oracle(const CommonOpts& o, std::uint64_t max_vectors, int max_bits, const std::string& json,
               std::ostream& out) {
  Loaded l = load(o.netlist);
  VerificationConfig cfg = read_config_file(o.config, l.doc);
  OracleBudget budget{max_bits, max_vectors};
  auto unrolled = unroll(l.circuit, cfg.unroll_k);
  OracleVerdict v = brute_force_verdict(unrolled, cfg.blacklist, cfg.model, budget);
  out << "circuit " << l.circuit->name() << ", k = " << cfg.unroll_k << ", model " << describe(cfg.model) << "\n";
  out << "  " << v.vectors_checked << " fault vectors checked\n";
  out << "verdict: " << (v.resistant ? "Resistant" : "NotResistant") << "\n";
  if (!v.resistant) print_counterexample(*l.circuit, *v.vector, *v.inputs, out);
  if (!json.empty()) write_file(json, oracle_report_json(*l.circuit, cfg, v), out);
  return v.resistant ? kExitResistant : kExitNotResistant;
}

int cmd_reduce(const CommonOpts& o, std::ostream& out) {
  Loaded l = load(o.netlist);
  VerificationConfig cfg = o.resolve(l.doc);
  ReductionPlan plan = plan_reductions(*l.circuit, cfg.blacklist, cfg.model, cfg.reductions);
  out << plan_json(*l.circuit, cfg.blacklist, plan);
  return 0;
}

int cmd_encode(const CommonOpts& o, const std::string& dimacs, const std::string& sidecar,
               const std::string& controls, std::ostream& out) {
  Loaded l = load(o.netlist);
  VerificationConfig cfg = o.resolve(l.doc);
  PreparedProblem p = prepare(l.circuit, cfg);
  FrFormula fr = build_fr_formula(p.unrolled, p.controlled, p.plan.effective_model);
  EncodedProblem enc = encode(fr);
  write_file(dimacs, emit_dimacs(enc.cnf), out);
  if (!sidecar.empty()) write_file(sidecar, dimacs_sidecar(enc.cnf), out);
  if (!controls.empty()) write_file(controls, controls_json(p.controlled), out);
  return 0;
}

InputSequence parse_inputs(const std::vector<std::string>& words) {
  InputSequence seq;
  for (const auto& w : words) {
    std::stringstream ss(w);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) seq.push_back(parse_bits(part));
    }
  }
  return seq;
}

int cmd_simulate(const std::string& netlist, const std::vector<std::string>& input_words, int k,
                 const std::vector<std::string>& faults, std::ostream& out) {
  Loaded l = load(netlist);
  InputSequence inputs = parse_inputs(input_words);
  if (k == 0) k = inputs.empty() ? l.circuit->default_cycles().value_or(1) : static_cast<int>(inputs.size());
  auto golden = unroll(l.circuit, k);

  std::vector<FaultEvent> events;
  for (const auto& f : faults) {
    auto colon = f.rfind(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::UnknownInstance, "fault '" + f + "' must be <name>@<cycle>:<s|r|bf>");
    }
    auto type = fault_type_from_string(f.substr(colon + 1));
    if (!type) throw Error(ErrorCode::InvalidModel, "unknown fault type in '" + f + "'");
    events.push_back({parse_instance(*l.circuit, f.substr(0, colon)), *type});
  }
  FaultVector v(std::move(events));
  const UnrolledCircuit circuit = v.empty() ? golden : apply_fault_vector(golden, v);
  Trace trace = run_trace(circuit, inputs);

  const auto& frame = *l.circuit;
  for (int c = 0; c < k; ++c) {
    out << "cycle " << c + 1 << ": in=" << format_bits(trace[c].inputs) << " out=";
    for (size_t i = 0; i < frame.data_outputs().size(); ++i) {
      out << (i ? " " : "") << frame.outputs()[frame.data_outputs()[i]].name << ":" << trace[c].outputs[i];
    }
    if (frame.flag_index()) out << " flag=" << trace[c].flag;
    out << "\n";
  }
  if (!v.empty()) {
    auto eff = check_effectiveness(golden, v, inputs);
    out << "fault vector " << describe(frame, v) << (eff.effective ? " is effective" : " is not effective");
    if (eff.effective) out << " (cycle " << *eff.divergence_cycle << ", output " << *eff.differing_output << ")";
    out << "\n";
  }
  return 0;
}

int cmd_gen_np(const std::string& cnf_path, int ne, const std::string& output, std::ostream& out) {
  Cnf phi = parse_dimacs(slurp(cnf_path));
  GeneratedInstance g = np_hardness_instance(phi, ne);
  std::string text = "# " + g.provenance + "\n";
  text += "# expected: " + std::string(*g.expected_resistant ? "Resistant" : "NotResistant") +
          " under zeta(" + std::to_string(ne) + ",1,{bf},r) with an empty blacklist\n";
  write_file(output, text + write_netlist(g.netlist), out);
  return 0;
}

int cmd_gen_random(std::uint64_t seed, const RandomParams& params, const std::string& output, std::ostream& out) {
  GeneratedInstance g = random_netlist(seed, params);
  std::string text = "# " + g.provenance + "\n";
  if (!g.suggested_blacklist.empty()) {
    text += "# suggested blacklist:";
    for (const auto& b : g.suggested_blacklist) text += " " + b;
    text += "\n";
  }
  write_file(output, text + write_netlist(g.netlist), out);
  return 0;
}

int cmd_solve(const std::string& path, std::ostream& out) {
  Cnf cnf = parse_dimacs(slurp(path));
  SatResult r = solve_builtin(cnf);
  if (r.status == SatStatus::Unsat) {
    out << "s UNSATISFIABLE\n";
    return 20;
  }
  if (r.status == SatStatus::Unknown) {
    out << "s UNKNOWN\n";
    return 0;
  }
  out << "s SATISFIABLE\nv";
  for (int v = 1; v <= cnf.num_vars; ++v) out << " " << (r.model[v] ? v : -v);
  out << " 0\n";
  return 10;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-resistance verification of gate-level netlists", "frv"};
  app.require_subcommand(1);

  CommonOpts verify_o, reduce_o, encode_o, oracle_o;
  std::string golden, json, dimacs;
  auto* verify_cmd = app.add_subcommand("verify", "Decide fault resistance with a SAT solver");
  verify_o.attach(verify_cmd);
  verify_cmd->add_option("--golden", golden, "Unprotected reference netlist");
  verify_cmd->add_option("--solver", verify_o.solver, "\"builtin\" or an external solver command");
  verify_cmd->add_option("--json", json, "Write the JSON report here ('-' for stdout)");
  verify_cmd->add_option("--dimacs", dimacs, "Write the CNF here (variable map next to it)");

  int sim_k = 0;
  std::string sim_netlist;
  std::vector<std::string> sim_inputs, sim_faults;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate the circuit, optionally under faults");
  sim_cmd->add_option("netlist", sim_netlist, "Netlist file")->required();
  sim_cmd->add_option("--inputs", sim_inputs, "Input bits per cycle, e.g. 0110,1001")->required();
  sim_cmd->add_option("--k", sim_k, "Cycle count (defaults to the number of input vectors)");
  sim_cmd->add_option("--fault", sim_faults, "Fault event <gate>@<cycle>:<s|r|bf>");

  auto* reduce_cmd = app.add_subcommand("reduce", "Print the reduction plan as JSON");
  reduce_o.attach(reduce_cmd);

  std::string enc_dimacs = "-", enc_sidecar, enc_controls;
  auto* encode_cmd = app.add_subcommand("encode", "Emit the CNF without solving it");
  encode_o.attach(encode_cmd);
  encode_cmd->add_option("--dimacs", enc_dimacs, "DIMACS output ('-' for stdout)");
  encode_cmd->add_option("--sidecar", enc_sidecar, "Variable map output");
  encode_cmd->add_option("--dump-controls", enc_controls, "Control variable map output");

  std::uint64_t max_vectors = OracleBudget{}.max_vectors;
  int max_bits = OracleBudget{}.max_input_bits;
  std::string oracle_json;
  auto* oracle_cmd = app.add_subcommand("oracle", "Decide fault resistance by exhaustive enumeration");
  oracle_o.attach(oracle_cmd);
  oracle_cmd->add_option("--max-vectors", max_vectors, "Fault vector budget");
  oracle_cmd->add_option("--max-input-bits", max_bits, "Input bit budget across all cycles");
  oracle_cmd->add_option("--json", oracle_json, "Write the JSON report here ('-' for stdout)");

  auto* gen_cmd = app.add_subcommand("gen", "Generate netlists");
  gen_cmd->require_subcommand(1);
  std::string np_cnf, gen_out = "-";
  int np_ne = 1;
  auto* np_cmd = gen_cmd->add_subcommand("np", "Satisfiability reduction instance");
  np_cmd->add_option("--cnf", np_cnf, "DIMACS formula")->required();
  np_cmd->add_option("--ne", np_ne, "Events per cycle");
  np_cmd->add_option("-o,--output", gen_out, "Output file ('-' for stdout)");
  std::uint64_t seed = 1;
  RandomParams rp;
  bool no_flag = false;
  auto* rand_cmd = gen_cmd->add_subcommand("random", "Random netlist");
  rand_cmd->add_option("--seed", seed, "Seed");
  rand_cmd->add_option("--max-gates", rp.max_gates, "Gate budget");
  rand_cmd->add_option("--max-regs", rp.max_regs, "Register budget");
  rand_cmd->add_option("--inputs", rp.num_inputs, "Number of primary inputs");
  rand_cmd->add_flag("--no-flag", no_flag, "Omit the error flag");
  rand_cmd->add_option("-o,--output", gen_out, "Output file ('-' for stdout)");

  std::string solve_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a DIMACS file with the builtin solver (exit 10/20)");
  solve_cmd->add_option("dimacs", solve_path, "DIMACS file")->required();

  std::vector<std::string> argv_store{"frv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify_o, golden, json, dimacs, out);
    if (*sim_cmd) return cmd_simulate(sim_netlist, sim_inputs, sim_k, sim_faults, out);
    if (*reduce_cmd) return cmd_reduce(reduce_o, out);
    if (*encode_cmd) return cmd_encode(encode_o, enc_dimacs, enc_sidecar, enc_controls, out);
    if (*oracle_cmd) return cmd_oracle(oracle_o, max_vectors, max_bits, oracle_json, out);
    if (*np_cmd) return cmd_gen_np(np_cnf, np_ne, gen_out, out);
    if (*rand_cmd) {
      rp.with_flag = !no_flag;
      return cmd_gen_random(seed, rp, gen_out, out);
    }
    if (*solve_cmd) return cmd_solve(solve_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace frv
