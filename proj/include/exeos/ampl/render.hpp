#pragma once

#include <string>

#include "exeos/ampl/ast.hpp"

namespace exeos::ampl {

// Canonical text form: one declaration per line, single spaces, minimal
// parentheses. parse_model(render_model(ast)) reproduces `ast` exactly for
// any AST produced by parse_model.
std::string render_model(const AmplModelAst& ast);

// Same duality with parse_data.
std::string render_data(const DataSection& data);

std::string render_expr(const Expr& expr);

}  // namespace exeos::ampl
