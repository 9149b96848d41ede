#include "exeos/llm/structured.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace exeos::llm {

std::string_view to_string(LlmErrorKind kind) {
  switch (kind) {
    case LlmErrorKind::Timeout: return "timeout";
    case LlmErrorKind::Http: return "http";
    case LlmErrorKind::ExhaustedRetries: return "exhausted-retries";
    case LlmErrorKind::ScriptExhausted: return "script-exhausted";
    case LlmErrorKind::MalformedStructure: return "malformed-structure";
    case LlmErrorKind::NoSpecBlock: return "no-spec-block";
  }
  return "http";
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Scalar: return "scalar";
    case Dimension::OneDimensional: return "one-dimensional";
    case Dimension::TwoDimensional: return "two-dimensional";
  }
  return "scalar";
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::optional<Dimension> parse_dimension(const std::string& s) {
  if (s == "scalar") return Dimension::Scalar;
  if (s == "one-dimensional") return Dimension::OneDimensional;
  if (s == "two-dimensional") return Dimension::TwoDimensional;
  return std::nullopt;
}

LlmError malformed(std::string msg) {
  return {LlmErrorKind::MalformedStructure, std::move(msg)};
}

Result<SymbolMeta, LlmError> parse_symbol(const std::string& line,
                                          SymbolKind kind) {
  // name | dimension | description
  std::size_t p1 = line.find('|');
  std::size_t p2 = p1 == std::string::npos ? std::string::npos
                                           : line.find('|', p1 + 1);
  if (p2 == std::string::npos)
    return malformed("symbol line needs `name | dimension | description`: " +
                     line);
  SymbolMeta meta;
  meta.kind = kind;
  meta.name = trim(line.substr(0, p1));
  std::string dim = trim(line.substr(p1 + 1, p2 - p1 - 1));
  meta.description = trim(line.substr(p2 + 1));
  if (!valid_identifier(meta.name))
    return malformed("symbol name '" + meta.name +
                     "' is not a valid identifier");
  auto d = parse_dimension(dim);
  if (!d)
    return malformed("dimension '" + dim +
                     "' is not scalar|one-dimensional|two-dimensional");
  meta.dimension = *d;
  return meta;
}

}  // namespace

std::vector<std::pair<std::string, bool>> markup_tokens(
    const std::string& text) {
  std::vector<std::pair<std::string, bool>> out;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] != '\\') continue;
    bool is_var = text.compare(i, 5, "\\var{") == 0;
    bool is_param = text.compare(i, 7, "\\param{") == 0;
    if (!is_var && !is_param) continue;
    std::size_t open = i + (is_var ? 5 : 7);
    std::size_t close = text.find('}', open);
    if (close == std::string::npos) continue;
    out.emplace_back(text.substr(open, close - open), is_var);
    i = close;
  }
  return out;
}

Result<StructuredProblem, LlmError> parse_structured(const std::string& text) {
  static const std::vector<std::string> headers = {
      "OBJECTIVES:", "PARAMETERS:", "VARIABLES:", "CONSTRAINTS:",
      "REWRITTEN:"};

  // Split to lines; map header -> block body lines.
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  std::map<std::string, std::vector<std::string>> blocks;
  std::string current;
  for (const auto& raw : lines) {
    std::string t = trim(raw);
    if (std::find(headers.begin(), headers.end(), t) != headers.end()) {
      if (blocks.contains(t)) return malformed("duplicate block " + t);
      blocks[t];
      current = t;
      continue;
    }
    if (current.empty()) {
      if (!t.empty())
        return malformed("text before the first block header: " + t);
      continue;
    }
    blocks[current].push_back(raw);
  }
  for (const auto& h : headers)
    if (!blocks.contains(h)) return malformed("missing block " + h);

  StructuredProblem sp;
  for (const auto& l : blocks["OBJECTIVES:"]) {
    std::string t = trim(l);
    if (!t.empty()) sp.objectives.push_back(t);
  }
  for (const auto& l : blocks["CONSTRAINTS:"]) {
    std::string t = trim(l);
    if (!t.empty()) sp.constraints.push_back(t);
  }
  for (const auto& l : blocks["PARAMETERS:"]) {
    std::string t = trim(l);
    if (t.empty()) continue;
    auto m = parse_symbol(t, SymbolKind::Parameter);
    if (!m.ok()) return m.error();
    sp.parameters.push_back(m.value());
  }
  for (const auto& l : blocks["VARIABLES:"]) {
    std::string t = trim(l);
    if (t.empty()) continue;
    auto m = parse_symbol(t, SymbolKind::Variable);
    if (!m.ok()) return m.error();
    sp.variables.push_back(m.value());
  }
  {
    // Preserve interior line structure; trim the outside.
    std::string body;
    for (const auto& l : blocks["REWRITTEN:"]) {
      body += l;
      body += '\n';
    }
    sp.rewritten_description = trim(body);
  }

  std::set<std::string> names;
  for (const auto& m : sp.parameters)
    if (!names.insert(m.name).second)
      return malformed("duplicate symbol name '" + m.name + "'");
  for (const auto& m : sp.variables)
    if (!names.insert(m.name).second)
      return malformed("duplicate symbol name '" + m.name + "'");

  std::set<std::string> param_names, var_names;
  for (const auto& m : sp.parameters) param_names.insert(m.name);
  for (const auto& m : sp.variables) var_names.insert(m.name);
  for (const auto& [name, is_var] : markup_tokens(sp.rewritten_description)) {
    if (is_var && !var_names.contains(name))
      return malformed("\\var{" + name + "} does not name a listed variable");
    if (!is_var && !param_names.contains(name))
      return malformed("\\param{" + name +
                       "} does not name a listed parameter");
  }
  return sp;
}

std::string render_structured(const StructuredProblem& sp) {
  std::string out = "OBJECTIVES:\n";
  for (const auto& o : sp.objectives) out += o + "\n";
  out += "PARAMETERS:\n";
  for (const auto& m : sp.parameters)
    out += m.name + " | " + std::string(to_string(m.dimension)) + " | " +
           m.description + "\n";
  out += "VARIABLES:\n";
  for (const auto& m : sp.variables)
    out += m.name + " | " + std::string(to_string(m.dimension)) + " | " +
           m.description + "\n";
  out += "CONSTRAINTS:\n";
  for (const auto& c : sp.constraints) out += c + "\n";
  out += "REWRITTEN:\n";
  out += sp.rewritten_description;
  out += '\n';
  return out;
}

Result<std::string, LlmError> extract_spec(const std::string& response) {
  std::size_t open = response.find("```");
  std::string body;
  if (open != std::string::npos) {
    std::size_t bol = response.find('\n', open);
    if (bol == std::string::npos)
      return LlmError{LlmErrorKind::NoSpecBlock,
                      "unterminated code fence in response"};
    std::size_t close = response.find("```", bol + 1);
    if (close == std::string::npos)
      return LlmError{LlmErrorKind::NoSpecBlock,
                      "unterminated code fence in response"};
    body = response.substr(bol + 1, close - bol - 1);
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r'))
      body.pop_back();
  } else {
    body = trim(response);
  }
  if (body.empty())
    return LlmError{LlmErrorKind::NoSpecBlock,
                    "response contains no specification text"};
  return body;
}

}  // namespace exeos::llm
