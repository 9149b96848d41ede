#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exeos/databind/bind.hpp"
#include "exeos/pipeline/bundle.hpp"
#include "exeos/pipeline/variant.hpp"
#include "exeos/solver/solve.hpp"

namespace exeos::pipeline {

// The exhaustive, exclusive outcome partition every record lands in.
enum class OutcomeClass { Solved, CompileError, RuntimeError };

std::string_view to_string(OutcomeClass c);

// Result of executing one spec: solver outcomes for specs that reached the
// solver, compile errors for everything that failed before it.
using ExecResult =
    std::variant<solver::Solved, solver::RuntimeError, exeos::CompileError>;

OutcomeClass classify(const ExecResult& result);

struct ExecOutcome {
  ExecResult result;
  // Feedback block for the refinement prompt; empty when solved.
  std::string feedback;
};

struct SpecAttempt {
  std::string spec;
  OutcomeClass outcome = OutcomeClass::CompileError;
  std::string detail;  // objective when solved, error rendering otherwise

  friend bool operator==(const SpecAttempt&, const SpecAttempt&) = default;
};

struct TranscriptEntry {
  std::string step;  // "structure" | "generate" | "refine"
  std::string prompt_digest;
  std::string response_digest;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct RunRecord {
  std::string problem_id;
  std::string variant;
  int run_index = 0;
  std::optional<llm::StructuredProblem> structured_problem;
  std::vector<SpecAttempt> spec_history;  // size == 1 + refinement_count
  OutcomeClass final_class = OutcomeClass::CompileError;
  std::string final_detail;
  int refinement_count = 0;
  std::optional<double> objective;  // present iff final_class == Solved
  double wall_time_ms = 0.0;
  std::vector<TranscriptEntry> transcript;
};

// Prompt context resources shared across runs. When `gateway` is null, each
// run builds a private gateway from its VariantConfig.
struct FewShotSet {
  std::vector<llm::FewShot> structure;
  std::vector<llm::FewShot> ampl;
  std::vector<llm::FewShot> external;
};

struct PipelineEnv {
  llm::Gateway* gateway = nullptr;
  const FewShotSet* few_shots = nullptr;
  std::string scratch_root;  // defaults to a temp directory when empty
};

// Reads example pairs from `dir`/{structure,ampl,external}: each example is
// `<stem>.problem.md` next to `<stem>.answer.md`, taken in stem order.
// Missing subdirectories yield empty groups; an unpaired file is an error.
Result<FewShotSet, PipelineError> load_few_shots(const std::string& dir);

// Step 4 for one spec text. Ampl target: parse -> validate -> instantiate ->
// solve in-process. External target: write spec + generic data under
// `scratch_dir`, run cfg.runtime_command with the wall-clock timeout, and
// classify from the exit code and result document (exit 0 + `status:` line;
// exit 2 = compile error; anything else = unexpected termination).
ExecOutcome execute_spec(const std::string& spec,
                         const databind::BoundData& data,
                         const VariantConfig& cfg,
                         const std::string& scratch_dir);

// Steps 1-4 for one (bundle, variant, run) cell. Binding and bundle problems
// are configuration errors and abort; gateway failures abort with
// Kind::Gateway; spec-level failures land in the record.
Result<RunRecord, PipelineError> run_variant(const ProblemBundle& bundle,
                                             const VariantConfig& cfg,
                                             const PipelineEnv& env = {},
                                             int run_index = 0);

// RQ5 shape: no tables, no manifest, no data document. The spec must be
// self-contained; for the ampl target it must carry model and data sections
// separated by a line reading `data;`.
Result<RunRecord, PipelineError> run_baseline(const ProblemBundle& bundle,
                                              const VariantConfig& cfg,
                                              const PipelineEnv& env = {},
                                              int run_index = 0);

}  // namespace exeos::pipeline
