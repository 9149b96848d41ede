#include <algorithm>
#include <fstream>
#include <sstream>

#include "exeos/llm/gateway.hpp"

namespace exeos::llm {

namespace {

std::string rtrim_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

bool all_digits(const std::string& s) {
  return !s.empty() &&
         s.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace

Result<ScriptedBackend, LlmError> load_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return LlmError{LlmErrorKind::ScriptExhausted,
                    "cannot open script file " + path};
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::string key;
  std::string body;
  bool have_block = false;
  auto flush = [&] {
    if (have_block) entries.emplace_back(key, rtrim_newlines(body));
    body.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("### ", 0) == 0) {
      flush();
      key = line.substr(4);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      have_block = true;
      continue;
    }
    if (!have_block) {
      if (line.find_first_not_of(" \t") != std::string::npos)
        return LlmError{LlmErrorKind::ScriptExhausted,
                        "script text before the first `### <key>` header"};
      continue;
    }
    body += line;
    body += '\n';
  }
  flush();
  if (entries.empty())
    return LlmError{LlmErrorKind::ScriptExhausted,
                    "script file has no response blocks"};

  ScriptedBackend sb;
  bool all_ordinal = true;
  for (const auto& [k, _] : entries)
    if (!all_digits(k)) all_ordinal = false;
  if (all_ordinal) {
    // Sequence script: blocks ordered by their integer key.
    std::vector<std::pair<long, std::string>> ordered;
    for (const auto& [k, v] : entries) ordered.emplace_back(std::stol(k), v);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, v] : ordered) sb.sequence.push_back(std::move(v));
    return sb;
  }
  for (auto& [k, v] : entries) {
    if (k.rfind("hash:", 0) == 0) {
      sb.keyed[k.substr(5)] = std::move(v);
    } else if (k.rfind("contains:", 0) == 0) {
      sb.contains_rules.emplace_back(k.substr(9), std::move(v));
    } else {
      return LlmError{LlmErrorKind::ScriptExhausted,
                      "script key '" + k +
                          "' is neither an ordinal, hash:<hex>, nor "
                          "contains:<fragment>"};
    }
  }
  return sb;
}

Result<std::string, LlmError> Gateway::complete_scripted(
    const ScriptedBackend& sb, const std::string& prompt) {
  if (!sb.keyed.empty() || !sb.contains_rules.empty()) {
    auto it = sb.keyed.find(fnv1a_hex(prompt));
    if (it != sb.keyed.end()) return it->second;
    for (const auto& [fragment, response] : sb.contains_rules)
      if (prompt.find(fragment) != std::string::npos) return response;
    return LlmError{LlmErrorKind::ScriptExhausted,
                    "no scripted response matches the request (hash " +
                        fnv1a_hex(prompt) + ")"};
  }
  std::size_t idx = cursor_.fetch_add(1);
  if (idx >= sb.sequence.size())
    return LlmError{LlmErrorKind::ScriptExhausted,
                    "scripted sequence exhausted after " +
                        std::to_string(sb.sequence.size()) + " responses"};
  return sb.sequence[idx];
}

}  // namespace exeos::llm
