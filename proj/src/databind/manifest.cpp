#include "exeos/databind/manifest.hpp"

#include <fstream>
#include <sstream>

namespace exeos::databind {

std::string ManifestError::describe() const {
  std::string out = "manifest error " + path;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": " + message;
  return out;
}

const SetEntry* BindingManifest::find_set(const std::string& name) const {
  for (const auto& e : sets)
    if (e.name == name) return &e;
  return nullptr;
}

const ParamEntry* BindingManifest::find_param(const std::string& name) const {
  for (const auto& e : params)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  if (sep == ' ') {
    while (in >> item) items.push_back(item);
  } else {
    while (std::getline(in, item, sep)) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
  }
  return items;
}

struct Section {
  bool is_set = false;
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> pairs;  // key, value
  std::vector<std::size_t> pair_lines;
};

}  // namespace

Result<BindingManifest, ManifestError> parse_manifest(const std::string& text,
                                                      const std::string& path) {
  auto fail = [&](std::size_t line, std::string msg) {
    return ManifestError{path, line, std::move(msg)};
  };

  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        return fail(line_no, "unterminated section header");
      auto words = split_list(line.substr(1, line.size() - 2), ' ');
      if (words.size() != 2 || (words[0] != "set" && words[0] != "param"))
        return fail(line_no, "section header must be [set NAME] or [param NAME]");
      Section s;
      s.is_set = words[0] == "set";
      s.name = words[1];
      s.line = line_no;
      sections.push_back(std::move(s));
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      return fail(line_no, "expected `key = value`, got \"" + line + "\"");
    if (sections.empty())
      return fail(line_no, "key-value pair before any section header");
    sections.back().pairs.emplace_back(trim(line.substr(0, eq)),
                                       trim(line.substr(eq + 1)));
    sections.back().pair_lines.push_back(line_no);
  }

  BindingManifest manifest;
  for (auto& section : sections) {
    for (const auto& prior : sections) {
      if (&prior == &section) break;
      if (prior.is_set == section.is_set && prior.name == section.name)
        return fail(section.line, "duplicate section [" +
                                      std::string(section.is_set ? "set " : "param ") +
                                      section.name + "]");
    }

    if (section.is_set) {
      SetEntry entry;
      entry.name = section.name;
      for (std::size_t i = 0; i < section.pairs.size(); ++i) {
        const auto& [key, value] = section.pairs[i];
        std::size_t at = section.pair_lines[i];
        if (key == "members") {
          entry.members = split_list(value, ' ');
        } else if (key == "table") {
          entry.table = value;
        } else if (key == "column") {
          entry.column = value;
        } else {
          return fail(at, "unknown key `" + key + "` in [set " + section.name + "]");
        }
      }
      bool has_inline = !entry.members.empty();
      bool has_table = !entry.table.empty() || !entry.column.empty();
      if (has_inline == has_table)
        return fail(section.line, "[set " + section.name +
                                      "] needs either `members` or `table`+`column`");
      if (has_table && (entry.table.empty() || entry.column.empty()))
        return fail(section.line,
                    "[set " + section.name + "] needs both `table` and `column`");
      manifest.sets.push_back(std::move(entry));
      continue;
    }

    ParamEntry entry;
    entry.name = section.name;
    bool has_value = false, has_values = false;
    for (std::size_t i = 0; i < section.pairs.size(); ++i) {
      const auto& [key, value] = section.pairs[i];
      std::size_t at = section.pair_lines[i];
      if (key == "table") {
        entry.table = value;
      } else if (key == "key_columns") {
        entry.key_columns = split_list(value, ',');
      } else if (key == "value_column") {
        entry.value_column = value;
      } else if (key == "index_sets") {
        entry.index_sets = split_list(value, ',');
      } else if (key == "value") {
        auto v = parse_double(value);
        if (!v) return fail(at, "`value` must be a number, got \"" + value + "\"");
        entry.inline_scalar = *v;
        entry.has_inline = true;
        has_value = true;
      } else if (key == "values") {
        entry.has_inline = true;
        has_values = true;
        // Tuples are comma-separated; within a tuple, whitespace-separated
        // keys followed by one value. `values = R1 A 2, R1 B 4`.
        for (const auto& tuple : split_list(value, ','))
          entry.inline_rows.push_back(split_list(tuple, ' '));
      } else if (key == "default") {
        auto v = parse_double(value);
        if (!v) return fail(at, "`default` must be a number, got \"" + value + "\"");
        entry.default_value = *v;
        entry.has_default = true;
      } else {
        return fail(at, "unknown key `" + key + "` in [param " + section.name + "]");
      }
    }

    bool has_table = !entry.table.empty() || !entry.key_columns.empty() ||
                     !entry.value_column.empty();
    if (has_table && entry.has_inline)
      return fail(section.line, "[param " + section.name +
                                    "] mixes table and inline sources");
    if (!has_table && !entry.has_inline)
      return fail(section.line, "[param " + section.name +
                                    "] has no value source");
    if (has_value && has_values)
      return fail(section.line, "[param " + section.name +
                                    "] has both `value` and `values`");
    if (has_table) {
      if (entry.table.empty() || entry.value_column.empty())
        return fail(section.line, "[param " + section.name +
                                      "] needs `table` and `value_column`");
      if (entry.key_columns.size() > 2)
        return fail(section.line, "[param " + section.name +
                                      "] supports at most 2 key columns");
    }
    if (has_value && !entry.index_sets.empty())
      return fail(section.line, "[param " + section.name +
                                    "] is scalar; `index_sets` not allowed");
    if (has_values && entry.index_sets.empty())
      return fail(section.line, "[param " + section.name +
                                    "] needs `index_sets` for indexed values");
    if (entry.index_sets.size() > 2)
      return fail(section.line, "[param " + section.name +
                                    "] supports at most 2 index sets");
    if (has_table && entry.key_columns.size() != entry.index_sets.size())
      return fail(section.line, "[param " + section.name + "] has " +
                                    std::to_string(entry.key_columns.size()) +
                                    " key column(s) but " +
                                    std::to_string(entry.index_sets.size()) +
                                    " index set(s)");
    if (has_values) {
      std::size_t want = entry.index_sets.size() + 1;
      for (const auto& row : entry.inline_rows)
        if (row.size() != want)
          return fail(section.line,
                      "[param " + section.name + "] inline tuples need " +
                          std::to_string(want) + " token(s) each");
    }
    manifest.params.push_back(std::move(entry));
  }

  return manifest;
}

Result<BindingManifest, ManifestError> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return ManifestError{path, 0, "cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path);
}

}  // namespace exeos::databind
