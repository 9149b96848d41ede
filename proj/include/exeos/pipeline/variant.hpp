#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "exeos/ampl/instantiate.hpp"
#include "exeos/llm/gateway.hpp"
#include "exeos/solver/solve.hpp"

namespace exeos::pipeline {

// One cell of the ablation matrix: target language, whether the raw
// description is structured first, and whether failed specs re-enter the
// generate/execute loop.
struct VariantConfig {
  std::string label;
  llm::Target target = llm::Target::Ampl;
  bool structured = false;
  bool refinement = false;
  int max_refinements = 5;
  int runs = 5;
  ampl::ObjectivePolicy objective_policy;
  solver::SolverParams solver_params;
  llm::LlmConfig llm;

  // External runtime: argv prefix; the spec path, data path, and result path
  // are appended. Wall-clock bounded, unlike the embedded solver.
  std::vector<std::string> runtime_command;
  std::chrono::milliseconds runtime_timeout{60000};
};

// Built-in presets: Ampl1-4 and Python1-4. Suffix 1 = unstructured one-off,
// 2 = unstructured + refinement, 3 = structured one-off, 4 = structured +
// refinement; Python presets target the external runtime.
std::optional<VariantConfig> preset_variant(const std::string& label);
std::vector<std::string> preset_labels();

}  // namespace exeos::pipeline
