#pragma once

#include <string>

#include "frv/config.hpp"
#include "frv/fault_encoder.hpp"
#include "frv/oracle.hpp"
#include "frv/reductions.hpp"
#include "frv/verify.hpp"

namespace frv {

inline constexpr const char* kToolName = "frv";
inline constexpr int kReportFormatVersion = 1;

// JSON report of one verify run (schema in docs/report.schema.json).
std::string verify_report_json(const SequentialCircuit& frame, const VerificationConfig& config,
                               const VerifyResult& result);

// Same shape for a brute-force oracle run; stats carry the vector count.
std::string oracle_report_json(const SequentialCircuit& frame, const VerificationConfig& config,
                               const OracleVerdict& verdict);

std::string plan_json(const SequentialCircuit& frame, const Blacklist& original, const ReductionPlan& plan);

// Instance name -> {"c": ..., "b1": ..., "b2": ...}.
std::string controls_json(const ControlledCircuit& cc);

std::string model_json(const FaultResistanceModel& model);

}  // namespace frv
