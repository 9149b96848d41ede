#include "exeos/llm/gateway.hpp"

namespace exeos::llm {

Gateway::Gateway(LlmConfig config) : config_(std::move(config)) {}

Result<std::string, LlmError> Gateway::complete(const std::string& prompt) {
  if (prompt_hook_) prompt_hook_(prompt);
  if (const auto* sb = std::get_if<ScriptedBackend>(&config_.backend))
    return complete_scripted(*sb, prompt);
  return complete_remote(std::get<RemoteBackend>(config_.backend), prompt);
}

Result<StructuredProblem, LlmError> Gateway::structure_problem(
    const std::string& description, const std::vector<FewShot>& few_shots) {
  auto response = complete(build_structure_prompt(description, few_shots));
  if (!response.ok()) return response.error();
  return parse_structured(response.value());
}

Result<std::string, LlmError> Gateway::generate_spec(
    const GenContext& context, Target target,
    const std::vector<FewShot>& few_shots) {
  auto response =
      complete(build_generation_prompt(context, target, few_shots));
  if (!response.ok()) return response.error();
  return extract_spec(response.value());
}

Result<std::string, LlmError> Gateway::refine_spec(
    const std::string& prev_spec, const std::string& feedback,
    const GenContext& context, Target target,
    const std::vector<FewShot>& few_shots) {
  auto response = complete(build_refinement_prompt(prev_spec, feedback,
                                                   context, target,
                                                   few_shots));
  if (!response.ok()) return response.error();
  return extract_spec(response.value());
}

}  // namespace exeos::llm
