#pragma once

#include <string>
#include <vector>

#include "exeos/ampl/ast.hpp"
#include "exeos/common.hpp"

namespace exeos::ampl {

struct ValidationReport {
  std::vector<std::string> warnings;
};

// Cross-checks a parsed model against a parsed data section: every model
// set/param must be covered (arity- and bound-correct); data with no
// matching declaration only warns.
Result<ValidationReport, CompileError> validate(const AmplModelAst& ast,
                                                const DataSection& data);

}  // namespace exeos::ampl
