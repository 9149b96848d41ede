#pragma once

#include <string_view>

#include "exeos/ampl/ast.hpp"
#include "exeos/common.hpp"

namespace exeos::ampl {

// Parses a model document (.mod subset). The returned AST always satisfies
// the structural invariants: unique declaration names, resolved references,
// matching subscript arity, and at least one variable and one objective.
Result<AmplModelAst, CompileError> parse_model(std::string_view text);

// Parses a data document (.dat subset): set lists, scalar params, 1-D lists
// and 2-D header tables. An optional leading `data;` statement is accepted.
Result<DataSection, CompileError> parse_data(std::string_view text);

}  // namespace exeos::ampl
