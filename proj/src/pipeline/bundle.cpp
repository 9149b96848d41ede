#include "exeos/pipeline/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace exeos::pipeline {

namespace fs = std::filesystem;

std::string PipelineError::describe() const {
  std::string out = "pipeline error [";
  switch (kind) {
    case Kind::Config: out += "config"; break;
    case Kind::Binding: out += "binding"; break;
    case Kind::Gateway: out += "gateway"; break;
    case Kind::Io: out += "io"; break;
  }
  out += "]: " + message;
  return out;
}

namespace {

Result<std::string, PipelineError> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return PipelineError{PipelineError::Kind::Config,
                         "cannot read " + path.string()};
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Result<ProblemBundle, PipelineError> load_bundle(const std::string& dir) {
  fs::path root(dir);
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    return PipelineError{PipelineError::Kind::Config,
                         dir + " is not a directory"};

  ProblemBundle bundle;
  bundle.root = root.string();
  bundle.id = root.filename().string();
  if (bundle.id.empty()) bundle.id = root.parent_path().filename().string();

  auto description = read_file(root / "description.md");
  if (!description) return description.error();
  bundle.description = trim(*description);
  if (bundle.description.empty())
    return PipelineError{PipelineError::Kind::Config,
                         bundle.id + ": description.md is empty"};

  auto truth = read_file(root / "ground_truth.txt");
  if (!truth) return truth.error();
  auto value = parse_double(trim(*truth));
  if (!value || !std::isfinite(*value))
    return PipelineError{PipelineError::Kind::Config,
                         bundle.id + ": ground_truth.txt must hold one finite "
                                     "decimal, got \"" +
                             trim(*truth) + "\""};
  bundle.ground_truth = *value;

  if (fs::is_directory(root / "tables", ec)) {
    for (const auto& entry : fs::directory_iterator(root / "tables"))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        bundle.table_paths.push_back(entry.path().string());
    std::sort(bundle.table_paths.begin(), bundle.table_paths.end());
  }
  if (fs::is_regular_file(root / "binding.manifest", ec))
    bundle.manifest_path = (root / "binding.manifest").string();
  if (bundle.manifest_path.empty() && !bundle.table_paths.empty())
    return PipelineError{PipelineError::Kind::Config,
                         bundle.id + ": tables/ without binding.manifest"};

  if (fs::is_regular_file(root / "inline" / "description.md", ec)) {
    auto inline_text = read_file(root / "inline" / "description.md");
    if (!inline_text) return inline_text.error();
    bundle.inline_description = trim(*inline_text);
  }

  return bundle;
}

}  // namespace exeos::pipeline
