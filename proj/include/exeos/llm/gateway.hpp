#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "exeos/llm/structured.hpp"

namespace exeos::llm {

enum class Target { Ampl, ExternalRuntime };

std::string_view to_string(Target t);

struct FewShot {
  std::string problem;
  std::string answer;
};

struct RemoteBackend {
  std::string endpoint;       // scheme://host[:port]
  std::string model;
  std::string auth_token_env; // token is read from this env var, never inline
  std::string flavor = "openai";  // "openai" | "gemini"
};

struct ScriptedBackend {
  std::vector<std::string> sequence;           // ordinal responses
  std::map<std::string, std::string> keyed;    // fnv1a_hex(prompt) -> response
  // Fallback rules tried in file order: key matches when the prompt contains
  // the fragment.
  std::vector<std::pair<std::string, std::string>> contains_rules;
};

// Script file: blocks headed by `### <key>`. All-integer keys make a
// sequence script; `hash:<hex>` keys match the FNV-1a hash of the prompt;
// `contains:<fragment>` keys match by substring.
Result<ScriptedBackend, LlmError> load_script(const std::string& path);

struct LlmConfig {
  std::variant<ScriptedBackend, RemoteBackend> backend = ScriptedBackend{};
  int max_output_tokens = 2048;
  std::chrono::milliseconds request_timeout{30000};
  double rate_limit_per_minute = 60.0;
  int retries = 2;
};

// Chat-completion access with a deterministic scripted backend for tests and
// a remote HTTP backend for live runs. Shareable across threads.
class Gateway {
 public:
  explicit Gateway(LlmConfig config);

  Result<std::string, LlmError> complete(const std::string& prompt);

  // Step 1: organize a raw description into components.
  Result<StructuredProblem, LlmError> structure_problem(
      const std::string& description, const std::vector<FewShot>& few_shots);

  using GenContext = std::variant<StructuredProblem, std::string>;

  // Step 3(i): produce a specification for the target language.
  Result<std::string, LlmError> generate_spec(
      const GenContext& context, Target target,
      const std::vector<FewShot>& few_shots);

  // Step 3(ii): regenerate from the previous spec plus solver feedback.
  Result<std::string, LlmError> refine_spec(
      const std::string& prev_spec, const std::string& feedback,
      const GenContext& context, Target target,
      const std::vector<FewShot>& few_shots);

  // Test hook: observes every assembled prompt before dispatch.
  void set_prompt_hook(std::function<void(const std::string&)> hook) {
    prompt_hook_ = std::move(hook);
  }

  const LlmConfig& config() const { return config_; }

 private:
  Result<std::string, LlmError> complete_scripted(const ScriptedBackend& sb,
                                                  const std::string& prompt);
  Result<std::string, LlmError> complete_remote(const RemoteBackend& rb,
                                                const std::string& prompt);

  LlmConfig config_;
  std::function<void(const std::string&)> prompt_hook_;
  std::atomic<std::size_t> cursor_{0};
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point next_allowed_{};
};

// Prompt assembly (deterministic; exposed for prompt-capture tests).
std::string build_structure_prompt(const std::string& description,
                                   const std::vector<FewShot>& few_shots);
std::string build_generation_prompt(const Gateway::GenContext& context,
                                    Target target,
                                    const std::vector<FewShot>& few_shots);
std::string build_refinement_prompt(const std::string& prev_spec,
                                    const std::string& feedback,
                                    const Gateway::GenContext& context,
                                    Target target,
                                    const std::vector<FewShot>& few_shots);

}  // namespace exeos::llm
