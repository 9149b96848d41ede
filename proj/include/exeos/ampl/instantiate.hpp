#pragma once

#include <map>
#include <string>

#include "exeos/ampl/ast.hpp"
#include "exeos/common.hpp"
#include "exeos/instance.hpp"

namespace exeos::ampl {

// How multiple declared objectives collapse into the single objective an
// instance carries.
//  - Single: exactly one declared objective is required.
//  - Lexicographic: the first declared objective wins (later ones recorded
//    in provenance only).
//  - Weighted: maximize the weighted sum of the named objectives' raw
//    expressions; declared senses are ignored, signs live in the weights.
struct ObjectivePolicy {
  enum class Kind { Single, Lexicographic, Weighted };
  Kind kind = Kind::Single;
  std::map<std::string, double> weights;

  static ObjectivePolicy single() { return {}; }
  static ObjectivePolicy lexicographic() {
    return {Kind::Lexicographic, {}};
  }
  static ObjectivePolicy weighted(std::map<std::string, double> w) {
    return {Kind::Weighted, std::move(w)};
  }
};

// Expands indexed declarations over set members in data order, unrolls sums,
// folds constants. Requires a prior successful validate().
Result<ProblemInstance, CompileError> instantiate(
    const AmplModelAst& ast, const DataSection& data,
    const ObjectivePolicy& policy);

}  // namespace exeos::ampl
