// Command-line surface over the core library: structure, bind, generate,
// solve, run, bench, report. Exit codes follow sysexits where no domain code
// applies: 0 solved/success, 2 compile error, 3 runtime error, 4 gateway
// error, 64 usage, 65 bad input data.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exeos/ampl/instantiate.hpp"
#include "exeos/ampl/parser.hpp"
#include "exeos/ampl/validate.hpp"
#include "exeos/common.hpp"
#include "exeos/databind/bind.hpp"
#include "exeos/llm/gateway.hpp"
#include "exeos/pipeline/bench.hpp"
#include "exeos/pipeline/bundle.hpp"
#include "exeos/pipeline/runner.hpp"
#include "exeos/pipeline/variant.hpp"
#include "exeos/solver/solve.hpp"
#include "exeos/stats/metrics.hpp"
#include "exeos/stats/report.hpp"
#include "exeos/stats/stat_tests.hpp"

namespace fs = std::filesystem;
using namespace exeos;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitCompile = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitGateway = 4;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct CmdError {
  int code = kExitUsage;
  std::string message;
};

int fail(const CmdError& error) {
  std::cerr << "exeos: " << error.message << "\n";
  return error.code;
}

// Every setting a command can depend on, after merging defaults, the config
// file, and command-line flags (flags win).
struct Settings {
  std::string backend = "scripted";  // "scripted" | "remote"
  std::string script;                // scripted-response file; empty = none
  std::string endpoint;
  std::string model;
  std::string auth_token_env;        // name of the env var holding the token
  std::string flavor = "openai";
  int jobs = 1;
  long long seed = 0;
  double timeout_secs = 60.0;        // request + external-runtime wall clock
  std::string records = "records";
  std::string few_shots;             // example directory; empty = none
  int runs = 0;                      // 0 = keep the preset's default
  int max_refinements = 5;
  std::vector<std::string> runtime_command{"python3"};
  std::string objective = "single";
  std::string model_label;           // report column; empty = derived
};

std::string derived_model_label(const Settings& s) {
  if (!s.model_label.empty()) return s.model_label;
  if (s.backend == "remote" && !s.model.empty()) return s.model;
  return "scripted";
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(
      static_cast<long long>(std::llround(seconds * 1000.0)));
}

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return out.good();
}

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> parts;
  for (std::string token; in >> token;) parts.push_back(token);
  return parts;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string trim(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

// ---- config file -----------------------------------------------------------

// `key = value` lines, `#` comments. Unknown keys are rejected so typos
// cannot silently fall back to defaults.
Result<bool, CmdError> apply_config_file(Settings& s, const std::string& path) {
  auto text = slurp(path);
  if (!text)
    return CmdError{kExitUsage, "cannot read config file " + path};
  std::istringstream in(*text);
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& what) {
    return CmdError{kExitUsage,
                    path + ":" + std::to_string(line_no) + ": " + what};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) return bad("expected `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto as_int = [&](long long lo, long long hi) -> std::optional<long long> {
      try {
        std::size_t used = 0;
        long long parsed = std::stoll(value, &used);
        if (used != value.size() || parsed < lo || parsed > hi)
          return std::nullopt;
        return parsed;
      } catch (...) {
        return std::nullopt;
      }
    };
    if (key == "backend") {
      if (value != "scripted" && value != "remote")
        return bad("backend must be `scripted` or `remote`");
      s.backend = value;
    } else if (key == "script") {
      s.script = value;
    } else if (key == "endpoint") {
      s.endpoint = value;
    } else if (key == "model") {
      s.model = value;
    } else if (key == "auth_token_env") {
      s.auth_token_env = value;
    } else if (key == "flavor") {
      if (value != "openai" && value != "gemini")
        return bad("flavor must be `openai` or `gemini`");
      s.flavor = value;
    } else if (key == "jobs") {
      auto n = as_int(1, 256);
      if (!n) return bad("jobs must be an integer in [1, 256]");
      s.jobs = static_cast<int>(*n);
    } else if (key == "seed") {
      auto n = as_int(0, std::numeric_limits<long long>::max());
      if (!n) return bad("seed must be a non-negative integer");
      s.seed = *n;
    } else if (key == "timeout") {
      auto secs = parse_double(value);
      if (!secs || !(*secs > 0))
        return bad("timeout must be a positive number of seconds");
      s.timeout_secs = *secs;
    } else if (key == "records") {
      s.records = value;
    } else if (key == "few_shots") {
      s.few_shots = value;
    } else if (key == "runs") {
      auto n = as_int(1, 1000);
      if (!n) return bad("runs must be an integer in [1, 1000]");
      s.runs = static_cast<int>(*n);
    } else if (key == "max_refinements") {
      auto n = as_int(0, 100);
      if (!n) return bad("max_refinements must be an integer in [0, 100]");
      s.max_refinements = static_cast<int>(*n);
    } else if (key == "runtime_command") {
      auto argv = split_ws(value);
      if (argv.empty()) return bad("runtime_command must not be empty");
      s.runtime_command = argv;
    } else if (key == "objective") {
      s.objective = value;
    } else if (key == "model_label") {
      s.model_label = value;
    } else {
      return bad("unknown config key `" + key + "`");
    }
  }
  return true;
}

// ---- resolved-config digest --------------------------------------------------

// One line per resolved setting plus the command and its inputs; the FNV-1a
// digest of this text identifies the run for exact replay.
void log_digest(const Settings& s, const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& extras) {
  std::vector<std::pair<std::string, std::string>> entries{
      {"auth_token_env", s.auth_token_env},
      {"backend", s.backend},
      {"command", command},
      {"endpoint", s.endpoint},
      {"few_shots", s.few_shots},
      {"flavor", s.flavor},
      {"jobs", std::to_string(s.jobs)},
      {"max_refinements", std::to_string(s.max_refinements)},
      {"model", s.model},
      {"model_label", derived_model_label(s)},
      {"objective", s.objective},
      {"records", s.records},
      {"runs", std::to_string(s.runs)},
      {"runtime_command", [&] {
         std::string joined;
         for (const auto& part : s.runtime_command) {
           if (!joined.empty()) joined += ' ';
           joined += part;
         }
         return joined;
       }()},
      {"script", s.script},
      {"seed", std::to_string(s.seed)},
      {"timeout", format_double(s.timeout_secs)},
  };
  entries.insert(entries.end(), extras.begin(), extras.end());
  std::sort(entries.begin(), entries.end());
  std::string canon;
  for (const auto& [key, value] : entries)
    canon += key + "=" + value + "\n";
  std::cerr << "resolved config " << fnv1a_hex(canon) << "\n";
}

// ---- shared builders -----------------------------------------------------------

Result<ampl::ObjectivePolicy, CmdError> parse_objective_policy(
    const std::string& text) {
  if (text == "single") return ampl::ObjectivePolicy::single();
  if (text == "lexicographic") return ampl::ObjectivePolicy::lexicographic();
  if (text.rfind("weighted:", 0) == 0) {
    std::map<std::string, double> weights;
    for (const auto& pair : split_on(text.substr(9), ',')) {
      auto eq = pair.find('=');
      if (eq == std::string::npos)
        return CmdError{kExitUsage,
                        "objective weights must be `name=value` pairs"};
      std::string name = trim(pair.substr(0, eq));
      auto weight = parse_double(trim(pair.substr(eq + 1)));
      if (name.empty() || !weight)
        return CmdError{kExitUsage,
                        "bad objective weight `" + pair + "`"};
      weights[name] = *weight;
    }
    if (weights.empty())
      return CmdError{kExitUsage, "weighted objective needs at least one weight"};
    return ampl::ObjectivePolicy::weighted(std::move(weights));
  }
  return CmdError{kExitUsage,
                  "objective must be single, lexicographic, or "
                  "weighted:name=w[,name=w...]"};
}

Result<llm::LlmConfig, CmdError> make_llm_config(const Settings& s) {
  llm::LlmConfig cfg;
  cfg.request_timeout = to_ms(s.timeout_secs);
  if (s.backend == "remote") {
    if (s.endpoint.empty() || s.model.empty())
      return CmdError{kExitUsage,
                      "remote backend needs `endpoint` and `model` configured"};
    cfg.backend =
        llm::RemoteBackend{s.endpoint, s.model, s.auth_token_env, s.flavor};
    return cfg;
  }
  if (!s.script.empty()) {
    if (!fs::is_regular_file(s.script))
      return CmdError{kExitUsage, "script file " + s.script + " not found"};
    auto script = llm::load_script(s.script);
    if (!script.ok())
      return CmdError{kExitData, "script file: " + script.error().message};
    cfg.backend = *script;
  }
  return cfg;
}

// The token stays in the environment; only its variable name is configured.
// A remote backend with the variable unset fails here, before any prompt.
std::optional<int> missing_remote_token(const Settings& s) {
  if (s.backend != "remote" || s.auth_token_env.empty()) return std::nullopt;
  const char* value = std::getenv(s.auth_token_env.c_str());
  if (value && *value) return std::nullopt;
  std::cerr << "exeos: auth token variable " << s.auth_token_env
            << " is not set\n";
  return kExitGateway;
}

Result<pipeline::FewShotSet, CmdError> make_few_shots(const Settings& s) {
  if (s.few_shots.empty()) return pipeline::FewShotSet{};
  if (!fs::is_directory(s.few_shots))
    return CmdError{kExitUsage,
                    "few-shot directory " + s.few_shots + " not found"};
  auto shots = pipeline::load_few_shots(s.few_shots);
  if (!shots.ok()) return CmdError{kExitData, shots.error().describe()};
  return *shots;
}

Result<pipeline::VariantConfig, CmdError> make_variant(const Settings& s,
                                                       const std::string& label) {
  auto cfg = pipeline::preset_variant(label);
  if (!cfg) {
    std::string known;
    for (const auto& name : pipeline::preset_labels()) known += " " + name;
    return CmdError{kExitUsage,
                    "unknown variant label `" + label + "`; presets:" + known};
  }
  auto llm_cfg = make_llm_config(s);
  if (!llm_cfg.ok()) return llm_cfg.error();
  cfg->llm = *llm_cfg;
  cfg->runtime_command = s.runtime_command;
  cfg->runtime_timeout = to_ms(s.timeout_secs);
  cfg->max_refinements = s.max_refinements;
  if (s.runs > 0) cfg->runs = s.runs;
  auto policy = parse_objective_policy(s.objective);
  if (!policy.ok()) return policy.error();
  cfg->objective_policy = *policy;
  return *cfg;
}

int exit_for(const pipeline::PipelineError& error) {
  switch (error.kind) {
    case pipeline::PipelineError::Kind::Gateway:
      return kExitGateway;
    case pipeline::PipelineError::Kind::Binding:
    case pipeline::PipelineError::Kind::Io:
      return kExitData;
    case pipeline::PipelineError::Kind::Config:
      return kExitUsage;
  }
  return kExitUsage;
}

int exit_for_outcome(pipeline::OutcomeClass c) {
  switch (c) {
    case pipeline::OutcomeClass::Solved:
      return kExitSolved;
    case pipeline::OutcomeClass::CompileError:
      return kExitCompile;
    case pipeline::OutcomeClass::RuntimeError:
      return kExitRuntime;
  }
  return kExitRuntime;
}

std::string summary_line(const pipeline::RunRecord& record) {
  std::string line = record.problem_id + " " + record.variant + " run" +
                     std::to_string(record.run_index) + ": " +
                     std::string(pipeline::to_string(record.final_class));
  if (record.objective) line += " objective " + sig6(*record.objective);
  line += " refinements " + std::to_string(record.refinement_count);
  return line;
}

// ---- commands -------------------------------------------------------------------

int cmd_structure(const Settings& s, const std::string& input) {
  log_digest(s, "structure", {{"input", input}});
  auto description = slurp(input);
  if (!description)
    return fail({kExitUsage, "cannot read " + input});
  auto shots = make_few_shots(s);
  if (!shots.ok()) return fail(shots.error());
  if (auto code = missing_remote_token(s)) return *code;
  auto llm_cfg = make_llm_config(s);
  if (!llm_cfg.ok()) return fail(llm_cfg.error());
  llm::Gateway gateway(*llm_cfg);
  auto structured = gateway.structure_problem(*description, shots->structure);
  if (!structured.ok())
    return fail({kExitGateway, "gateway: " + structured.error().message});
  std::string rendered = llm::render_structured(*structured);
  std::cout << rendered;
  if (rendered.empty() || rendered.back() != '\n') std::cout << "\n";
  return kExitSolved;
}

int cmd_bind(const Settings& s, const std::string& bundle_dir,
             const std::string& format, const std::string& out_path) {
  log_digest(s, "bind",
             {{"bundle", bundle_dir}, {"format", format}, {"out", out_path}});
  auto bundle = pipeline::load_bundle(bundle_dir);
  if (!bundle.ok())
    return fail({exit_for(bundle.error()), bundle.error().describe()});
  if (!bundle->has_binding())
    return fail({kExitData, bundle->id + " has no binding manifest"});
  auto manifest = databind::load_manifest(bundle->manifest_path);
  if (!manifest.ok()) return fail({kExitData, manifest.error().describe()});
  auto tables = databind::load_tables(bundle->table_paths);
  if (!tables.ok()) return fail({kExitData, tables.error().describe()});
  auto meta = databind::meta_from_manifest(*manifest);
  auto bound = databind::bind(*manifest, meta, *tables);
  if (!bound.ok()) return fail({kExitData, bound.error().describe()});
  std::string text = format == "generic" ? databind::emit_generic_data(*bound)
                                         : databind::emit_ampl_data(*bound);
  if (out_path.empty()) {
    std::cout << text;
    return kExitSolved;
  }
  if (!spill(out_path, text))
    return fail({kExitData, "cannot write " + out_path});
  return kExitSolved;
}

int cmd_generate(const Settings& s, const std::string& input,
                 const std::string& target_name, bool structured,
                 const std::string& out_path) {
  log_digest(s, "generate",
             {{"input", input},
              {"target", target_name},
              {"structured", structured ? "true" : "false"},
              {"out", out_path}});
  auto description = slurp(input);
  if (!description) return fail({kExitUsage, "cannot read " + input});
  llm::Target target = target_name == "external" ? llm::Target::ExternalRuntime
                                                 : llm::Target::Ampl;
  auto shots = make_few_shots(s);
  if (!shots.ok()) return fail(shots.error());
  if (auto code = missing_remote_token(s)) return *code;
  auto llm_cfg = make_llm_config(s);
  if (!llm_cfg.ok()) return fail(llm_cfg.error());
  llm::Gateway gateway(*llm_cfg);

  llm::Gateway::GenContext context = *description;
  if (structured) {
    auto sp = gateway.structure_problem(*description, shots->structure);
    if (!sp.ok())
      return fail({kExitGateway, "gateway: " + sp.error().message});
    context = *sp;
  }
  const auto& group = target == llm::Target::Ampl ? shots->ampl
                                                  : shots->external;
  auto spec = gateway.generate_spec(context, target, group);
  if (!spec.ok()) {
    bool no_spec = spec.error().kind == llm::LlmErrorKind::NoSpecBlock;
    return fail({no_spec ? kExitCompile : kExitGateway,
                 "gateway: " + spec.error().message});
  }
  std::string text = *spec;
  if (text.empty() || text.back() != '\n') text += "\n";
  if (out_path.empty()) {
    std::cout << text;
    return kExitSolved;
  }
  if (!spill(out_path, text)) return fail({kExitData, "cannot write " + out_path});
  return kExitSolved;
}

int cmd_solve(const Settings& s, const std::string& model_path,
              const std::string& data_path, const std::string& objective_text) {
  log_digest(s, "solve",
             {{"model_path", model_path},
              {"data_path", data_path},
              {"objective_override", objective_text}});
  auto model_text = slurp(model_path);
  if (!model_text) return fail({kExitUsage, "cannot read " + model_path});
  auto data_text = slurp(data_path);
  if (!data_text) return fail({kExitUsage, "cannot read " + data_path});

  auto compile_fail = [&](const CompileError& error) {
    std::cerr << error.describe() << "\n";
    return kExitCompile;
  };
  auto ast = ampl::parse_model(*model_text);
  if (!ast.ok()) return compile_fail(ast.error());
  auto data = ampl::parse_data(*data_text);
  if (!data.ok()) return compile_fail(data.error());
  auto report = ampl::validate(*ast, *data);
  if (!report.ok()) return compile_fail(report.error());
  for (const auto& warning : report->warnings)
    std::cerr << "warning: " << warning << "\n";

  auto policy = parse_objective_policy(objective_text);
  if (!policy.ok()) return fail(policy.error());
  auto instance = ampl::instantiate(*ast, *data, *policy);
  if (!instance.ok()) return compile_fail(instance.error());

  solver::SolverParams params;
  auto outcome = solver::solve_milp(*instance, params);
  if (const auto* ok = std::get_if<solver::Solved>(&outcome)) {
    std::cout << "status: solved\n";
    std::cout << "objective: " << sig6(ok->objective) << "\n";
    for (const auto& [name, value] : ok->assignment)
      std::cout << name << " = " << format_double(value) << "\n";
    return kExitSolved;
  }
  const auto& error = std::get<solver::RuntimeError>(outcome);
  std::cout << "status: " << solver::to_string(error.kind) << "\n";
  std::cerr << solver::render_diagnostics(outcome, *instance, params);
  return kExitRuntime;
}

int cmd_run(const Settings& s, const std::string& bundle_dir,
            const std::string& label, int run_index, bool force_baseline) {
  log_digest(s, "run",
             {{"bundle", bundle_dir},
              {"variant", label},
              {"run_index", std::to_string(run_index)},
              {"baseline", force_baseline ? "true" : "false"}});
  auto bundle = pipeline::load_bundle(bundle_dir);
  if (!bundle.ok())
    return fail({exit_for(bundle.error()), bundle.error().describe()});
  auto cfg = make_variant(s, label);
  if (!cfg.ok()) return fail(cfg.error());
  auto shots = make_few_shots(s);
  if (!shots.ok()) return fail(shots.error());
  if (auto code = missing_remote_token(s)) return *code;

  bool baseline = force_baseline || !bundle->has_binding();
  if (baseline && !bundle->inline_description)
    return fail({kExitData, bundle->id + " has no inline/description.md"});

  pipeline::PipelineEnv env;
  pipeline::FewShotSet shot_set = *shots;
  env.few_shots = &shot_set;
  auto record = baseline
                    ? pipeline::run_baseline(*bundle, *cfg, env, run_index)
                    : pipeline::run_variant(*bundle, *cfg, env, run_index);
  if (!record.ok())
    return fail({exit_for(record.error()), record.error().describe()});

  pipeline::RecordStore store(s.records);
  auto saved = store.save(*record);
  if (!saved.ok())
    return fail({kExitData, saved.error().describe()});
  std::string key = pipeline::RecordStore::cell_key(
      record->problem_id, record->variant, record->run_index);
  if (!*saved)
    std::cerr << "exeos: record " << key << " already existed; kept previous\n";
  std::cout << "record: " << (fs::path(s.records) / (key + ".json")).string()
            << "\n";
  std::cout << summary_line(*record) << "\n";
  if (record->final_class != pipeline::OutcomeClass::Solved &&
      !record->final_detail.empty())
    std::cerr << record->final_detail << "\n";
  return exit_for_outcome(record->final_class);
}

Result<std::vector<pipeline::ProblemBundle>, CmdError> load_dataset(
    const std::string& dataset_dir) {
  if (!fs::is_directory(dataset_dir))
    return CmdError{kExitUsage, "dataset directory " + dataset_dir + " not found"};
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(dataset_dir))
    if (entry.is_directory()) dirs.push_back(entry.path().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    return CmdError{kExitUsage, "no problem bundles under " + dataset_dir};
  std::vector<pipeline::ProblemBundle> bundles;
  for (const auto& dir : dirs) {
    auto bundle = pipeline::load_bundle(dir);
    if (!bundle.ok())
      return CmdError{exit_for(bundle.error()), bundle.error().describe()};
    bundles.push_back(std::move(*bundle));
  }
  return bundles;
}

int cmd_bench(const Settings& s, const std::string& dataset_dir,
              const std::string& variants_csv, bool no_resume) {
  log_digest(s, "bench",
             {{"dataset", dataset_dir},
              {"variants", variants_csv},
              {"resume", no_resume ? "false" : "true"}});
  auto bundles = load_dataset(dataset_dir);
  if (!bundles.ok()) return fail(bundles.error());

  std::vector<std::string> labels = variants_csv.empty()
                                        ? pipeline::preset_labels()
                                        : split_on(variants_csv, ',');
  std::vector<pipeline::VariantConfig> matrix;
  for (const auto& label : labels) {
    auto cfg = make_variant(s, trim(label));
    if (!cfg.ok()) return fail(cfg.error());
    matrix.push_back(std::move(*cfg));
  }
  auto shots = make_few_shots(s);
  if (!shots.ok()) return fail(shots.error());
  if (auto code = missing_remote_token(s)) return *code;

  pipeline::PipelineEnv env;
  pipeline::FewShotSet shot_set = *shots;
  env.few_shots = &shot_set;
  pipeline::RecordStore store(s.records);
  pipeline::BenchOptions options;
  options.jobs = s.jobs;
  options.resume = !no_resume;
  auto records = pipeline::bench(*bundles, matrix, store, env, options);
  if (!records.ok())
    return fail({exit_for(records.error()), records.error().describe()});
  std::size_t solved = 0;
  for (const auto& record : *records)
    if (record.final_class == pipeline::OutcomeClass::Solved) ++solved;
  std::cout << "bench: " << records->size() << " records in " << s.records
            << " (" << solved << " solved)\n";
  return kExitSolved;
}

int cmd_report(const Settings& s, const std::string& records_dir,
               const std::string& dataset_dir,
               const std::string& comparisons_path, const std::string& model_flag,
               const std::string& out_dir_flag) {
  std::string out_dir = out_dir_flag.empty() ? records_dir : out_dir_flag;
  log_digest(s, "report",
             {{"records_dir", records_dir},
              {"dataset", dataset_dir},
              {"comparisons", comparisons_path},
              {"out_dir", out_dir}});

  pipeline::RecordStore store(records_dir);
  auto collected = store.collect();
  if (!collected.ok())
    return fail({kExitData, collected.error().describe()});
  if (collected->empty())
    return fail({kExitData, "no run records in " + records_dir});

  auto bundles = load_dataset(dataset_dir);
  if (!bundles.ok()) return fail(bundles.error());
  std::map<std::string, double> truths;
  for (const auto& bundle : *bundles) truths[bundle.id] = bundle.ground_truth;

  std::map<std::string, std::vector<pipeline::RunRecord>> by_variant;
  for (const auto& record : *collected)
    by_variant[record.variant].push_back(record);

  std::string model_label = model_flag.empty() ? derived_model_label(s)
                                               : model_flag;
  std::vector<stats::ReportCell> cells;
  for (const auto& [variant, records] : by_variant) {
    auto summary = stats::summarize(records, truths);
    if (!summary.ok())
      return fail({kExitData, summary.error().describe()});
    cells.push_back({variant, model_label, *summary});
  }

  std::vector<stats::Comparison> comparisons;
  if (!comparisons_path.empty()) {
    auto text = slurp(comparisons_path);
    if (!text)
      return fail({kExitUsage, "cannot read " + comparisons_path});
    auto plan = stats::parse_comparisons(*text);
    if (!plan.ok()) return fail({kExitData, plan.error().describe()});
    auto cell_records = [&](const std::string& name)
        -> const std::vector<pipeline::RunRecord>* {
      std::string variant = name;
      auto colon = name.find(':');
      if (colon != std::string::npos) {
        if (name.substr(colon + 1) != model_label) return nullptr;
        variant = name.substr(0, colon);
      }
      auto it = by_variant.find(variant);
      return it == by_variant.end() ? nullptr : &it->second;
    };
    auto defined_errors = [&](const std::vector<pipeline::RunRecord>& records) {
      std::vector<double> errors;
      for (const auto& record : records) {
        if (!record.objective) continue;
        auto err = stats::relative_error(*record.objective,
                                         truths[record.problem_id]);
        if (err) errors.push_back(*err);
      }
      return errors;
    };
    for (const auto& spec : *plan) {
      const auto* a = cell_records(spec.a);
      const auto* b = cell_records(spec.b);
      if (!a || !b)
        return fail({kExitData, "comparison cell `" +
                                     (a ? spec.b : spec.a) +
                                     "` has no records"});
      std::string label = spec.kind + " " + spec.a + " vs " + spec.b;
      if (spec.kind == "exec") {
        auto count = [](const std::vector<pipeline::RunRecord>& records) {
          std::size_t solved = 0;
          for (const auto& record : records)
            if (record.final_class == pipeline::OutcomeClass::Solved) ++solved;
          return solved;
        };
        comparisons.push_back(
            {label, stats::z_test_proportions(count(*a), a->size(),
                                              count(*b), b->size())});
      } else {
        auto xs = defined_errors(*a);
        auto ys = defined_errors(*b);
        if (xs.empty() || ys.empty())
          return fail({kExitData, "comparison `" + label +
                                      "` has a side with no defined "
                                      "relative errors"});
        comparisons.push_back({label, stats::mann_whitney_u(xs, ys)});
      }
    }
  }

  auto doc = stats::report(cells, comparisons);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::string csv_path = (fs::path(out_dir) / "report.csv").string();
  std::string md_path = (fs::path(out_dir) / "report.md").string();
  if (!spill(csv_path, doc.csv))
    return fail({kExitData, "cannot write " + csv_path});
  if (!spill(md_path, doc.markdown))
    return fail({kExitData, "cannot write " + md_path});
  std::cout << "wrote " << csv_path << "\n";
  std::cout << "wrote " << md_path << "\n";
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Natural-language optimization problems to executable algebraic "
      "specifications: generate, solve, and evaluate."};
  app.name("exeos");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", "exeos 0.1.0");

  std::string config_path;
  std::string backend_spec;
  int jobs_flag = 1;
  long long seed_flag = 0;
  double timeout_flag = 60.0;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--llm-backend", backend_spec,
                 "Backend override: scripted, scripted:<script-file>, or "
                 "remote");
  app.add_option("--jobs", jobs_flag, "Worker threads for bench")
      ->capture_default_str();
  app.add_option("--seed", seed_flag,
                 "Seed recorded for fixture-generation tooling")
      ->capture_default_str();
  app.add_option("--timeout", timeout_flag,
                 "Request/runtime timeout in seconds")
      ->capture_default_str();

  auto* structure_cmd = app.add_subcommand(
      "structure",
      "Organize a problem description into objectives, parameters, "
      "variables, and constraints");
  std::string structure_input;
  structure_cmd->add_option("description", structure_input,
                            "Problem description file")
      ->required();

  auto* bind_cmd = app.add_subcommand(
      "bind", "Bind a bundle's tables into a solver data document");
  std::string bind_bundle;
  std::string bind_format = "ampl";
  std::string bind_out;
  bind_cmd->add_option("bundle", bind_bundle, "Problem bundle directory")
      ->required();
  bind_cmd->add_option("--format", bind_format, "Output form: ampl or generic")
      ->check(CLI::IsMember({"ampl", "generic"}))
      ->capture_default_str();
  bind_cmd->add_option("--out", bind_out, "Write to file instead of stdout");

  auto* generate_cmd = app.add_subcommand(
      "generate", "Generate a specification from a problem description");
  std::string generate_input;
  std::string generate_target = "ampl";
  std::string generate_out;
  bool generate_structured = false;
  generate_cmd->add_option("description", generate_input,
                           "Problem description file")
      ->required();
  generate_cmd
      ->add_option("--target", generate_target,
                   "Specification target: ampl or external")
      ->check(CLI::IsMember({"ampl", "external"}))
      ->capture_default_str();
  generate_cmd->add_flag("--structured", generate_structured,
                         "Structure the description first");
  generate_cmd->add_option("--out", generate_out,
                           "Write to file instead of stdout");

  auto* solve_cmd = app.add_subcommand(
      "solve", "Solve a model + data pair with the embedded LP/MILP solver");
  std::string solve_model;
  std::string solve_data;
  std::string solve_objective;
  solve_cmd->add_option("model", solve_model, "Model file")->required();
  solve_cmd->add_option("data", solve_data, "Data file")->required();
  solve_cmd->add_option(
      "--objective", solve_objective,
      "Objective policy: single, lexicographic, or weighted:name=w[,...]");

  auto* run_cmd = app.add_subcommand(
      "run", "Run one problem bundle through one variant end to end");
  std::string run_bundle;
  std::string run_label;
  int run_index = 0;
  bool run_baseline_flag = false;
  run_cmd->add_option("bundle", run_bundle, "Problem bundle directory")
      ->required();
  run_cmd->add_option("variant", run_label, "Variant label, e.g. Ampl4")
      ->required();
  run_cmd->add_option("--run", run_index, "Run index within the cell")
      ->capture_default_str();
  run_cmd->add_flag("--baseline", run_baseline_flag,
                    "Force self-contained baseline mode (inline description)");
  std::string run_records;
  run_cmd->add_option("--records", run_records,
                      "Run-record directory (default: records)");

  auto* bench_cmd = app.add_subcommand(
      "bench", "Run a dataset through a variant matrix, persisting records");
  std::string bench_dataset;
  std::string bench_variants;
  bool bench_no_resume = false;
  bench_cmd->add_option("dataset", bench_dataset,
                        "Directory of problem bundles")
      ->required();
  bench_cmd->add_option("--variants", bench_variants,
                        "Comma-separated variant labels (default: all presets)");
  bench_cmd->add_flag("--no-resume", bench_no_resume,
                      "Re-run cells even if their record exists");
  std::string bench_records;
  bench_cmd->add_option("--records", bench_records,
                        "Run-record directory (default: records)");
  int bench_runs = 0;
  bench_cmd->add_option("--runs", bench_runs,
                        "Runs per cell (default: variant preset)");

  auto* report_cmd = app.add_subcommand(
      "report", "Summarize run records into CSV and Markdown reports");
  std::string report_records;
  std::string report_dataset;
  std::string report_comparisons;
  std::string report_model;
  std::string report_out_dir;
  report_cmd->add_option("records", report_records, "Run-record directory")
      ->required();
  report_cmd
      ->add_option("--dataset", report_dataset,
                   "Bundle directory supplying ground-truth objectives")
      ->required();
  report_cmd->add_option("--comparisons", report_comparisons,
                         "Comparison plan file (exec|relerr A vs B lines)");
  report_cmd->add_option("--model", report_model,
                         "Model label for report cells");
  report_cmd->add_option("--out-dir", report_out_dir,
                         "Report output directory (default: records dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Settings settings;
  if (!config_path.empty()) {
    auto applied = apply_config_file(settings, config_path);
    if (!applied.ok()) return fail(applied.error());
  }
  if (app.count("--llm-backend")) {
    if (backend_spec == "scripted" || backend_spec == "remote") {
      settings.backend = backend_spec;
    } else if (backend_spec.rfind("scripted:", 0) == 0) {
      settings.backend = "scripted";
      settings.script = backend_spec.substr(9);
    } else {
      return fail({kExitUsage, "bad --llm-backend `" + backend_spec + "`"});
    }
  }
  if (app.count("--jobs")) {
    if (jobs_flag < 1) return fail({kExitUsage, "--jobs must be >= 1"});
    settings.jobs = jobs_flag;
  }
  if (app.count("--seed")) {
    if (seed_flag < 0) return fail({kExitUsage, "--seed must be >= 0"});
    settings.seed = seed_flag;
  }
  if (app.count("--timeout")) {
    if (!(timeout_flag > 0))
      return fail({kExitUsage, "--timeout must be positive"});
    settings.timeout_secs = timeout_flag;
  }

  if (structure_cmd->parsed()) return cmd_structure(settings, structure_input);
  if (bind_cmd->parsed())
    return cmd_bind(settings, bind_bundle, bind_format, bind_out);
  if (generate_cmd->parsed())
    return cmd_generate(settings, generate_input, generate_target,
                        generate_structured, generate_out);
  if (solve_cmd->parsed()) {
    std::string objective = solve_cmd->count("--objective")
                                ? solve_objective
                                : settings.objective;
    return cmd_solve(settings, solve_model, solve_data, objective);
  }
  if (run_cmd->parsed()) {
    if (!run_records.empty()) settings.records = run_records;
    return cmd_run(settings, run_bundle, run_label, run_index,
                   run_baseline_flag);
  }
  if (bench_cmd->parsed()) {
    if (!bench_records.empty()) settings.records = bench_records;
    if (bench_cmd->count("--runs")) {
      if (bench_runs < 1) return fail({kExitUsage, "--runs must be >= 1"});
      settings.runs = bench_runs;
    }
    return cmd_bench(settings, bench_dataset, bench_variants, bench_no_resume);
  }
  if (report_cmd->parsed())
    return cmd_report(settings, report_records, report_dataset,
                      report_comparisons, report_model, report_out_dir);
  return kExitUsage;
}
