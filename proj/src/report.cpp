#include "frv/report.hpp"

#include <json.hpp>

namespace frv {

namespace {

using nlohmann::ordered_json;

ordered_json model_obj(const FaultResistanceModel& m) {
  ordered_json types = ordered_json::array();
  for (FaultType t : m.types.sorted()) types.push_back(std::string(to_string(t)));
  return {{"ne", m.ne}, {"nc", m.nc}, {"types", types}, {"location", std::string(to_string(m.location))}};
}

ordered_json counterexample_obj(const SequentialCircuit& frame, const FaultVector& v, const InputSequence& inputs,
                                std::optional<int> cycle, std::optional<std::string> output) {
  ordered_json events = ordered_json::array();
  for (const auto& e : v.events()) {
    events.push_back({{"instance", instance_name(frame, e.instance)},
                      {"gate", frame.net(e.instance.net).name},
                      {"cycle", e.instance.cycle},
                      {"type", std::string(to_string(e.type))}});
  }
  ordered_json in = ordered_json::array();
  for (const auto& bits : inputs) in.push_back(format_bits(bits));
  ordered_json out = {{"events", events}, {"inputs", in}};
  out["divergence_cycle"] = cycle ? ordered_json(*cycle) : ordered_json(nullptr);
  out["differing_output"] = output ? ordered_json(*output) : ordered_json(nullptr);
  return out;
}

ordered_json plan_obj(const ReductionPlan& plan) {
  ordered_json applied = ordered_json::array();
  for (const auto& a : plan.applied) applied.push_back({{"name", a.name}, {"removed", a.removed}});
  ordered_json skipped = ordered_json::array();
  for (const auto& s : plan.skipped) skipped.push_back({{"name", s.name}, {"reason", s.reason}});
  return {{"applied", applied}, {"skipped", skipped}};
}

ordered_json solver_obj(const SolverBackend& s) {
  if (s.builtin()) return "builtin";
  return {{"command", s.command}};
}

ordered_json header(const SequentialCircuit& frame, const VerificationConfig& config, const char* engine) {
  ordered_json j;
  j["tool"] = kToolName;
  j["format_version"] = kReportFormatVersion;
  j["engine"] = engine;
  j["circuit"] = frame.name();
  j["k"] = config.unroll_k;
  j["model"] = model_obj(config.model);
  return j;
}

}  // namespace

std::string model_json(const FaultResistanceModel& model) { return model_obj(model).dump(); }

std::string verify_report_json(const SequentialCircuit& frame, const VerificationConfig& config,
                               const VerifyResult& result) {
  ordered_json j = header(frame, config, "sat");
  j["verdict"] = std::string(to_string(result.verdict));
  j["effective_model"] = model_obj(result.plan.effective_model);
  j["blacklist"] = {{"original", config.blacklist.size()}, {"effective", result.plan.effective_blacklist.size()}};
  j["reductions"] = plan_obj(result.plan);
  j["solver"] = solver_obj(config.solver);
  if (result.counterexample) {
    const auto& c = *result.counterexample;
    j["counterexample"] = counterexample_obj(frame, c.vector, c.inputs, c.divergence_cycle, c.differing_output);
  } else {
    j["counterexample"] = nullptr;
  }
  const auto& s = result.stats;
  j["stats"] = {{"vars", s.vars},
                {"clauses", s.clauses},
                {"locations", s.locations},
                {"encode_ms", s.encode_ms},
                {"solve_ms", s.solve_ms},
                {"total_ms", s.encode_ms + s.solve_ms}};
  return j.dump(2) + "\n";
}

std::string oracle_report_json(const SequentialCircuit& frame, const VerificationConfig& config,
                               const OracleVerdict& verdict) {
  ordered_json j = header(frame, config, "oracle");
  j["verdict"] = verdict.resistant ? "Resistant" : "NotResistant";
  j["effective_model"] = model_obj(config.model);
  j["blacklist"] = {{"original", config.blacklist.size()}, {"effective", config.blacklist.size()}};
  j["reductions"] = {{"applied", ordered_json::array()}, {"skipped", ordered_json::array()}};
  j["solver"] = "none";
  if (!verdict.resistant) {
    j["counterexample"] = counterexample_obj(frame, *verdict.vector, *verdict.inputs, std::nullopt, std::nullopt);
  } else {
    j["counterexample"] = nullptr;
  }
  j["stats"] = {{"vectors_checked", verdict.vectors_checked}};
  return j.dump(2) + "\n";
}

std::string plan_json(const SequentialCircuit& frame, const Blacklist& original, const ReductionPlan& plan) {
  ordered_json j;
  j["circuit"] = frame.name();
  j["effective_model"] = model_obj(plan.effective_model);
  j["blacklist"] = {{"original", original.size()}, {"effective", plan.effective_blacklist.size()}};
  j["vulnerable_gates"] = {{"before", frame.gates().size() + frame.registers().size() - original.size()},
                           {"after", frame.gates().size() + frame.registers().size() - plan.effective_blacklist.size()}};
  j["reductions"] = plan_obj(plan);
  j["effective_blacklist"] = plan.effective_blacklist;
  return j.dump(2) + "\n";
}

std::string controls_json(const ControlledCircuit& cc) {
  ordered_json j = ordered_json::object();
  for (const auto& e : cc.controls()) {
    ordered_json v = {{"c", e.c}};
    if (e.b1) v["b1"] = *e.b1;
    if (e.b2) v["b2"] = *e.b2;
    j[instance_name(cc.base().frame(), e.instance)] = v;
  }
  return j.dump(2) + "\n";
}

}  // namespace frv
