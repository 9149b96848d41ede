#pragma once

#include <string>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::llm {

enum class LlmErrorKind {
  Timeout,
  Http,
  ExhaustedRetries,
  ScriptExhausted,
  MalformedStructure,
  NoSpecBlock,
};

std::string_view to_string(LlmErrorKind kind);

struct LlmError {
  LlmErrorKind kind = LlmErrorKind::Http;
  std::string message;
};

enum class Dimension { Scalar, OneDimensional, TwoDimensional };
enum class SymbolKind { Parameter, Variable };

std::string_view to_string(Dimension d);

struct SymbolMeta {
  std::string name;
  std::string description;
  Dimension dimension = Dimension::Scalar;
  SymbolKind kind = SymbolKind::Parameter;

  friend bool operator==(const SymbolMeta&, const SymbolMeta&) = default;
};

// Step-1 output: the four components of an optimization problem plus the
// description rewritten with \param{...} / \var{...} markup.
struct StructuredProblem {
  std::vector<std::string> objectives;
  std::vector<std::string> constraints;
  std::vector<SymbolMeta> parameters;
  std::vector<SymbolMeta> variables;
  std::string rewritten_description;

  friend bool operator==(const StructuredProblem&,
                         const StructuredProblem&) = default;
};

// Wire schema: OBJECTIVES: / PARAMETERS: / VARIABLES: / CONSTRAINTS: /
// REWRITTEN: headers, one item per line, symbol lines `name | dimension |
// description`. Parsing is strict: all five blocks exactly once, valid
// identifiers, resolvable markup. render(parse(x)) == parse-normalized x.
Result<StructuredProblem, LlmError> parse_structured(const std::string& text);
std::string render_structured(const StructuredProblem& sp);

// All \param{X} / \var{X} tokens in order of appearance; .second is true for
// \var. Malformed (unterminated) tokens are ignored.
std::vector<std::pair<std::string, bool>> markup_tokens(
    const std::string& text);

// First fenced code block, else the whole trimmed response; empty result is
// NoSpecBlock.
Result<std::string, LlmError> extract_spec(const std::string& response);

}  // namespace exeos::llm
