#include "exeos/pipeline/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "exeos/ampl/instantiate.hpp"
#include "exeos/ampl/parser.hpp"
#include "exeos/ampl/render.hpp"
#include "exeos/ampl/validate.hpp"
#include "exeos/pipeline/process.hpp"

namespace exeos::pipeline {

namespace fs = std::filesystem;

std::string_view to_string(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::Solved: return "solved";
    case OutcomeClass::CompileError: return "compile-error";
    case OutcomeClass::RuntimeError: return "runtime-error";
  }
  return "?";
}

OutcomeClass classify(const ExecResult& result) {
  if (std::holds_alternative<solver::Solved>(result))
    return OutcomeClass::Solved;
  if (std::holds_alternative<solver::RuntimeError>(result))
    return OutcomeClass::RuntimeError;
  return OutcomeClass::CompileError;
}

namespace {

ExecOutcome compile_failure(CompileError err) {
  std::string feedback = err.describe();
  return {ExecResult{std::move(err)}, std::move(feedback)};
}

ExecOutcome runtime_failure(solver::RuntimeErrorKind kind, std::string message) {
  std::string feedback = "ERROR ";
  feedback += solver::to_string(kind);
  feedback += "\n";
  feedback += message;
  feedback += "\n";
  return {ExecResult{solver::RuntimeError{kind, std::move(message), {}, {}}},
          std::move(feedback)};
}

ExecOutcome execute_ampl(const std::string& model_text,
                         const ampl::DataSection& data,
                         const VariantConfig& cfg) {
  auto ast = ampl::parse_model(model_text);
  if (!ast) return compile_failure(ast.error());
  auto report = ampl::validate(*ast, data);
  if (!report) return compile_failure(report.error());
  auto instance = ampl::instantiate(*ast, data, cfg.objective_policy);
  if (!instance) return compile_failure(instance.error());

  solver::SolveOutcome outcome = solver::solve_milp(*instance, cfg.solver_params);
  if (solver::solved(outcome)) return {ExecResult{std::get<solver::Solved>(outcome)}, ""};
  std::string feedback =
      solver::render_diagnostics(outcome, *instance, cfg.solver_params);
  return {ExecResult{std::get<solver::RuntimeError>(outcome)},
          std::move(feedback)};
}

std::string tail_of(const std::string& text, std::size_t limit = 400) {
  std::size_t begin = text.size() > limit ? text.size() - limit : 0;
  std::string out = text.substr(begin);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  return out;
}

ExecOutcome execute_external(const std::string& spec,
                             const databind::BoundData& data,
                             const VariantConfig& cfg,
                             const std::string& scratch_dir) {
  if (cfg.runtime_command.empty())
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           "no runtime command configured");
  std::error_code ec;
  fs::create_directories(scratch_dir, ec);
  if (ec)
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           "cannot create scratch directory " + scratch_dir);
  fs::path dir(scratch_dir);
  fs::path spec_path = dir / "spec.txt";
  fs::path data_path = dir / "data.json";
  fs::path result_path = dir / "result";
  {
    std::ofstream spec_out(spec_path, std::ios::binary);
    spec_out << spec;
    std::ofstream data_out(data_path, std::ios::binary);
    data_out << databind::emit_generic_data(data);
  }

  std::vector<std::string> argv = cfg.runtime_command;
  argv.push_back(spec_path.string());
  argv.push_back(data_path.string());
  argv.push_back(result_path.string());
  ProcessResult proc = run_process(argv, scratch_dir, cfg.runtime_timeout);
  {
    std::ofstream log(dir / "output.log", std::ios::binary);
    log << proc.output;
  }

  if (proc.timed_out)
    return runtime_failure(
        solver::RuntimeErrorKind::UnexpectedTermination,
        "the runtime hit the " + std::to_string(cfg.runtime_timeout.count()) +
            " ms wall-clock limit");
  if (proc.spawn_failed)
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           "failed to launch the runtime command");
  if (proc.exit_code == 2) {
    CompileError err;
    err.kind = CompileErrorKind::Syntax;
    err.message = "the external runtime rejected the specification";
    if (!proc.output.empty()) err.message += ": " + tail_of(proc.output);
    return compile_failure(std::move(err));
  }
  if (proc.exit_code != 0) {
    std::string msg =
        "the runtime exited with code " + std::to_string(proc.exit_code);
    if (!proc.output.empty()) msg += ": " + tail_of(proc.output);
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           std::move(msg));
  }

  std::ifstream result_in(result_path, std::ios::binary);
  if (!result_in)
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           "the runtime exited cleanly but wrote no result "
                           "document");
  std::string status;
  std::optional<double> objective;
  std::string line;
  while (std::getline(result_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("status:", 0) == 0) {
      status = line.substr(7);
      status.erase(0, status.find_first_not_of(" \t"));
    } else if (line.rfind("objective:", 0) == 0) {
      std::string value = line.substr(10);
      value.erase(0, value.find_first_not_of(" \t"));
      objective = parse_double(value);
    }
  }

  if (status == "solved") {
    if (!objective)
      return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                             "the result document has status solved but no "
                             "parsable objective");
    solver::Solved solved;
    solved.objective = *objective;
    return {ExecResult{std::move(solved)}, ""};
  }
  if (status == "infeasible")
    return runtime_failure(solver::RuntimeErrorKind::Infeasible,
                           "the external runtime reported the instance "
                           "infeasible");
  if (status == "unbounded")
    return runtime_failure(solver::RuntimeErrorKind::Unbounded,
                           "the external runtime reported the instance "
                           "unbounded");
  if (status == "error")
    return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                           "the external runtime reported an execution error" +
                               (proc.output.empty()
                                    ? std::string()
                                    : ": " + tail_of(proc.output)));
  return runtime_failure(solver::RuntimeErrorKind::UnexpectedTermination,
                         "the result document has unknown status \"" + status +
                             "\"");
}

// Self-contained ampl spec: model text, then a line reading `data;`, then
// the data section.
ExecOutcome execute_ampl_selfcontained(const std::string& spec,
                                       const VariantConfig& cfg) {
  std::istringstream in(spec);
  std::string line;
  std::string model_text, data_text;
  bool in_data = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    while (!trimmed.empty() &&
           (trimmed.back() == ' ' || trimmed.back() == '\t'))
      trimmed.pop_back();
    if (!in_data && trimmed == "data;") {
      in_data = true;
      continue;
    }
    (in_data ? data_text : model_text) += line + "\n";
  }
  if (!in_data) {
    CompileError err;
    err.kind = CompileErrorKind::Syntax;
    err.message =
        "a self-contained specification must carry a data section introduced "
        "by a line reading `data;`";
    return compile_failure(std::move(err));
  }
  auto data = ampl::parse_data(data_text);
  if (!data) return compile_failure(data.error());
  return execute_ampl(model_text, *data, cfg);
}

std::chrono::steady_clock::time_point now() {
  return std::chrono::steady_clock::now();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(now() - t0).count();
}

std::string default_scratch_root() {
  return (fs::temp_directory_path() / "exeos-scratch").string();
}

struct CellRunner {
  const ProblemBundle& bundle;
  const VariantConfig& cfg;
  const PipelineEnv& env;
  int run_index;
  bool baseline;

  Result<RunRecord, PipelineError> run() {
    auto t0 = now();
    RunRecord record;
    record.problem_id = bundle.id;
    record.variant = cfg.label;
    record.run_index = run_index;

    std::optional<llm::Gateway> local_gateway;
    llm::Gateway* gateway = env.gateway;
    if (!gateway) {
      local_gateway.emplace(cfg.llm);
      gateway = &*local_gateway;
    }
    static const FewShotSet no_shots;
    const FewShotSet& shots = env.few_shots ? *env.few_shots : no_shots;
    const auto& gen_shots =
        cfg.target == llm::Target::Ampl ? shots.ampl : shots.external;

    std::string description;
    if (baseline) {
      if (!bundle.inline_description)
        return PipelineError{PipelineError::Kind::Config,
                             bundle.id +
                                 ": baseline mode needs inline/description.md"};
      description = *bundle.inline_description;
    } else {
      description = bundle.description;
    }

    // Step 2. The manifest is authored against the problem, so binding is
    // driven by manifest-derived metadata; Step-1 output only shapes prompts.
    databind::BoundData data;
    if (!baseline) {
      if (!bundle.has_binding())
        return PipelineError{PipelineError::Kind::Config,
                             bundle.id + ": bundle has no binding.manifest; "
                                         "only baseline mode can run it"};
      auto tables = databind::load_tables(bundle.table_paths);
      if (!tables)
        return PipelineError{PipelineError::Kind::Binding,
                             tables.error().describe()};
      auto manifest = databind::load_manifest(bundle.manifest_path);
      if (!manifest)
        return PipelineError{PipelineError::Kind::Binding,
                             manifest.error().describe()};
      auto bound = databind::bind(*manifest,
                                  databind::meta_from_manifest(*manifest),
                                  *tables);
      if (!bound)
        return PipelineError{PipelineError::Kind::Binding,
                             bound.error().describe()};
      data = std::move(*bound);
    }

    auto push_transcript = [&](const char* step, const std::string& prompt,
                               const std::string& response) {
      record.transcript.push_back(
          {step, fnv1a_hex(prompt), fnv1a_hex(response)});
    };

    // Step 1.
    llm::Gateway::GenContext context = description;
    if (cfg.structured) {
      std::string prompt =
          llm::build_structure_prompt(description, shots.structure);
      auto response = gateway->complete(prompt);
      if (!response)
        return PipelineError{PipelineError::Kind::Gateway,
                             "structuring failed: " + response.error().message};
      push_transcript("structure", prompt, *response);
      auto sp = llm::parse_structured(*response);
      if (!sp)
        return PipelineError{PipelineError::Kind::Gateway,
                             "structuring failed: " + sp.error().message};
      record.structured_problem = *sp;
      context = *sp;
    }

    // Step 3 once, then the Step 4 <-> Step 3 loop while failures remain.
    std::string prompt = llm::build_generation_prompt(context, cfg.target,
                                                      gen_shots);
    auto response = gateway->complete(prompt);
    if (!response)
      return PipelineError{PipelineError::Kind::Gateway,
                           "generation failed: " + response.error().message};
    push_transcript("generate", prompt, *response);

    std::string spec;
    ExecOutcome exec = attempt(*response, 0, data, spec);
    record.spec_history.push_back(
        {spec, classify(exec.result), detail_of(exec)});

    while (classify(exec.result) != OutcomeClass::Solved && cfg.refinement &&
           record.refinement_count < cfg.max_refinements) {
      std::string refine_prompt = llm::build_refinement_prompt(
          spec, exec.feedback, context, cfg.target, gen_shots);
      auto refined = gateway->complete(refine_prompt);
      if (!refined)
        return PipelineError{PipelineError::Kind::Gateway,
                             "refinement failed: " + refined.error().message};
      push_transcript("refine", refine_prompt, *refined);
      ++record.refinement_count;
      exec = attempt(*refined, record.refinement_count, data, spec);
      record.spec_history.push_back(
          {spec, classify(exec.result), detail_of(exec)});
    }

    record.final_class = classify(exec.result);
    if (record.final_class == OutcomeClass::Solved) {
      record.objective = std::get<solver::Solved>(exec.result).objective;
    } else {
      record.final_detail = exec.feedback;
    }
    record.wall_time_ms = ms_since(t0);
    return record;
  }

  std::string detail_of(const ExecOutcome& exec) const {
    if (classify(exec.result) == OutcomeClass::Solved)
      return format_double(std::get<solver::Solved>(exec.result).objective);
    return exec.feedback;
  }

  // Extracts the spec from a raw response and executes it; `spec` returns
  // the extracted text (empty when the response had none).
  ExecOutcome attempt(const std::string& response, int attempt_index,
                      const databind::BoundData& data, std::string& spec) {
    auto extracted = llm::extract_spec(response);
    if (!extracted) {
      spec.clear();
      CompileError err;
      err.kind = CompileErrorKind::Syntax;
      err.message = "the response contained no specification";
      return compile_failure(std::move(err));
    }
    spec = *extracted;
    std::string scratch = scratch_dir(attempt_index);
    if (baseline) {
      if (cfg.target == llm::Target::Ampl)
        return execute_ampl_selfcontained(spec, cfg);
      return execute_external(spec, databind::BoundData{}, cfg, scratch);
    }
    return execute_spec(spec, data, cfg, scratch);
  }

  std::string scratch_dir(int attempt_index) const {
    fs::path root(env.scratch_root.empty() ? default_scratch_root()
                                           : env.scratch_root);
    return (root / bundle.id / cfg.label /
            ("run" + std::to_string(run_index)) /
            ("attempt" + std::to_string(attempt_index)))
        .string();
  }
};

}  // namespace

Result<FewShotSet, PipelineError> load_few_shots(const std::string& dir) {
  auto read = [](const fs::path& path) -> std::optional<std::string> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };

  FewShotSet set;
  const std::pair<const char*, std::vector<llm::FewShot>*> groups[] = {
      {"structure", &set.structure},
      {"ampl", &set.ampl},
      {"external", &set.external},
  };
  for (const auto& [sub, out] : groups) {
    fs::path root = fs::path(dir) / sub;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) continue;
    std::vector<std::string> stems;
    std::size_t answers = 0;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      std::string name = entry.path().filename().string();
      if (name.ends_with(".problem.md"))
        stems.push_back(name.substr(0, name.size() - 11));
      else if (name.ends_with(".answer.md"))
        ++answers;
    }
    std::sort(stems.begin(), stems.end());
    for (const auto& stem : stems) {
      auto problem = read(root / (stem + ".problem.md"));
      auto answer = read(root / (stem + ".answer.md"));
      if (!problem || !answer)
        return PipelineError{PipelineError::Kind::Config,
                             "example " + (root / stem).string() +
                                 " needs both .problem.md and .answer.md"};
      out->push_back({std::move(*problem), std::move(*answer)});
    }
    if (answers != stems.size())
      return PipelineError{PipelineError::Kind::Config,
                           root.string() +
                               " has answer files without matching problems"};
  }
  return set;
}

ExecOutcome execute_spec(const std::string& spec,
                         const databind::BoundData& data,
                         const VariantConfig& cfg,
                         const std::string& scratch_dir) {
  if (cfg.target == llm::Target::Ampl)
    return execute_ampl(spec, databind::to_data_section(data), cfg);
  return execute_external(spec, data, cfg, scratch_dir);
}

Result<RunRecord, PipelineError> run_variant(const ProblemBundle& bundle,
                                             const VariantConfig& cfg,
                                             const PipelineEnv& env,
                                             int run_index) {
  return CellRunner{bundle, cfg, env, run_index, /*baseline=*/false}.run();
}

Result<RunRecord, PipelineError> run_baseline(const ProblemBundle& bundle,
                                              const VariantConfig& cfg,
                                              const PipelineEnv& env,
                                              int run_index) {
  return CellRunner{bundle, cfg, env, run_index, /*baseline=*/true}.run();
}

}  // namespace exeos::pipeline
