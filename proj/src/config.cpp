#include "frv/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frv {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }
[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidModel, msg); }

int get_int(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) schema(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) schema(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

FaultResistanceModel parse_model(const json& m) {
  if (!m.is_object()) schema("'model' must be an object");
  for (const char* key : {"ne", "nc", "types", "location"}) {
    if (!m.contains(key)) schema(std::string("model is missing '") + key + "'");
  }
  FaultResistanceModel model;
  model.ne = get_int(m, "ne");
  model.nc = get_int(m, "nc");
  if (model.ne < 1) invalid("ne must be >= 1");
  if (model.nc < 1) invalid("nc must be >= 1");

  const json& types = m.at("types");
  if (!types.is_array()) schema("'types' must be an array");
  model.types = {};
  for (const json& t : types) {
    if (!t.is_string()) schema("fault types must be strings");
    auto ft = fault_type_from_string(t.get<std::string>());
    if (!ft) invalid("unknown fault type '" + t.get<std::string>() + "' (expected s, r or bf)");
    model.types.insert(*ft);
  }
  if (model.types.empty()) invalid("types must be non-empty");

  const json& loc = m.at("location");
  if (!loc.is_string()) schema("'location' must be a string");
  auto l = location_from_string(loc.get<std::string>());
  if (!l) invalid("location must be one of c, r, cr");
  model.location = *l;
  return model;
}

}  // namespace

VerificationConfig parse_config(std::string_view text, const NetlistDoc& doc) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("config must be a JSON object");
  if (!j.contains("model")) schema("config is missing 'model'");

  VerificationConfig cfg;
  try {
    if (j.contains("k")) {
      cfg.unroll_k = get_int(j, "k");
      if (cfg.unroll_k < 1) invalid("k must be >= 1");
    } else {
      cfg.unroll_k = doc.default_cycles.value_or(1);
    }
    cfg.model = parse_model(j.at("model"));

    if (j.contains("blacklist")) {
      const json& b = j.at("blacklist");
      if (!b.is_array()) schema("'blacklist' must be an array");
      for (const json& name : b) {
        if (!name.is_string()) schema("blacklist entries must be strings");
        const auto& s = name.get_ref<const std::string&>();
        if (!doc.is_register(s) && doc.find_gate(s) == nullptr) {
          throw Error(ErrorCode::UnknownBlacklistGate, "blacklist entry '" + s + "' is not a gate or register");
        }
        cfg.blacklist.insert(s);
      }
    }

    if (j.contains("reductions")) {
      const json& r = j.at("reductions");
      if (!r.is_object()) schema("'reductions' must be an object");
      cfg.reductions.fault_type = get_bool(r, "fault_type", cfg.reductions.fault_type);
      cfg.reductions.single_successor = get_bool(r, "single_successor", cfg.reductions.single_successor);
      cfg.reductions.single_exit = get_bool(r, "single_exit", cfg.reductions.single_exit);
    }

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.solver_given = true;
      if (s.is_string()) {
        if (s.get<std::string>() != "builtin") schema("solver must be \"builtin\" or {\"command\": [...]}");
      } else if (s.is_object() && s.contains("command") && s.at("command").is_array()) {
        for (const json& arg : s.at("command")) {
          if (!arg.is_string()) schema("solver command entries must be strings");
          cfg.solver.command.push_back(arg.get<std::string>());
        }
        if (cfg.solver.command.empty()) schema("solver command must be non-empty");
      } else {
        schema("solver must be \"builtin\" or {\"command\": [...]}");
      }
    }
  } catch (const json::exception& e) {
    schema(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

VerificationConfig read_config_file(const std::string& path, const NetlistDoc& doc) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), doc);
}

}  // namespace frv
