#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::pipeline {

struct PipelineError {
  enum class Kind { Config, Binding, Gateway, Io };
  Kind kind = Kind::Config;
  std::string message;

  std::string describe() const;
};

// One benchmark problem on disk:
//   description.md     natural-language problem statement
//   tables/*.csv       raw data exports
//   binding.manifest   parameter/set binding config
//   ground_truth.txt   reference objective value (single decimal)
//   inline/description.md   optional self-contained variant for baseline mode
struct ProblemBundle {
  std::string id;    // directory name
  std::string root;  // directory path
  std::string description;
  std::vector<std::string> table_paths;  // sorted by file name
  std::string manifest_path;             // empty when the bundle has no tables
  double ground_truth = 0.0;
  std::optional<std::string> inline_description;

  bool has_binding() const { return !manifest_path.empty(); }
};

Result<ProblemBundle, PipelineError> load_bundle(const std::string& dir);

}  // namespace exeos::pipeline
