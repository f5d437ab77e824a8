#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frv/cnf.hpp"
#include "frv/config.hpp"
#include "frv/fault_encoder.hpp"
#include "frv/formula.hpp"
#include "frv/reductions.hpp"
#include "frv/sat_solver.hpp"
#include "frv/simulator.hpp"

namespace frv {

struct CardinalityBound {
  std::vector<Ref> vars;  // formula variables
  int k = 0;
};

// Miter formula plus the cardinality side constraints.
struct FrFormula {
  Formula f;
  Ref root;  // Boolean part: d_i definitions, miter and flag masking
  std::vector<CardinalityBound> bounds;
  std::vector<std::vector<Ref>> inputs;  // [cycle-1][input]
  std::vector<Ref> controls;             // parallel to ControlledCircuit::controls()
  std::vector<std::string> control_names;  // every control and selection variable
  bool has_nc_bound = false;
  bool has_ne_bound = false;
};

// The golden side comes from `golden`; the faulty side from `cc`. Data
// outputs are matched by name and inputs by name. Throws ShapeMismatch when
// the two disagree on inputs, outputs or k. With `require_fault` the empty
// vector is excluded explicitly (needed when golden differs from cc's base).
FrFormula build_fr_formula(const UnrolledCircuit& golden, const ControlledCircuit& cc,
                           const FaultResistanceModel& model, bool require_fault = false);

struct EncodedProblem {
  Cnf cnf;
  std::vector<int> var_index;  // formula var -> CNF variable
};

EncodedProblem encode(const FrFormula& fr);

struct Counterexample {
  FaultVector vector;
  InputSequence inputs;
  int divergence_cycle = 0;
  std::string differing_output;
};

struct VerifyStats {
  int vars = 0;
  size_t clauses = 0;
  size_t locations = 0;
  double encode_ms = 0;
  double solve_ms = 0;
};

enum class Verdict { Resistant, NotResistant };

std::string_view to_string(Verdict v);

struct VerifyResult {
  Verdict verdict = Verdict::Resistant;
  std::optional<Counterexample> counterexample;
  ReductionPlan plan;
  VerifyStats stats;
};

struct VerifyOptions {
  // Separate unprotected circuit for the golden side; defaults to the
  // protected circuit itself.
  std::shared_ptr<const SequentialCircuit> golden;
  // Written when non-empty.
  std::string dimacs_path;
  std::string sidecar_path;
};

// unroll, plan reductions, instrument, encode, solve; a SAT answer is decoded
// and replayed on the simulator. Throws InternalEncodingError when the replay
// does not confirm the counterexample and BackendSpawnFailure / ModelParseError
// from the solver. An Unknown answer throws SolverUnknown.
VerifyResult verify(std::shared_ptr<const SequentialCircuit> circuit, const VerificationConfig& config,
                    const VerifyOptions& options = {});

// Instrumented circuit for the reduced problem, as used by verify.
struct PreparedProblem {
  UnrolledCircuit unrolled;
  ReductionPlan plan;
  ControlledCircuit controlled;
};

PreparedProblem prepare(std::shared_ptr<const SequentialCircuit> circuit, const VerificationConfig& config);

}  // namespace frv
