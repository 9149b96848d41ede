#include "exeos/pipeline/variant.hpp"

namespace exeos::pipeline {

std::vector<std::string> preset_labels() {
  return {"Ampl1", "Ampl2", "Ampl3", "Ampl4",
          "Python1", "Python2", "Python3", "Python4"};
}

std::optional<VariantConfig> preset_variant(const std::string& label) {
  bool ampl = label.rfind("Ampl", 0) == 0;
  bool python = label.rfind("Python", 0) == 0;
  if (!ampl && !python) return std::nullopt;
  std::string digit = label.substr(ampl ? 4 : 6);
  if (digit.size() != 1 || digit[0] < '1' || digit[0] > '4')
    return std::nullopt;
  int n = digit[0] - '0';

  VariantConfig cfg;
  cfg.label = label;
  cfg.target = ampl ? llm::Target::Ampl : llm::Target::ExternalRuntime;
  cfg.structured = n >= 3;
  cfg.refinement = n == 2 || n == 4;
  return cfg;
}

}  // namespace exeos::pipeline
