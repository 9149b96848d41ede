#pragma once

#include <string>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::databind {

struct ManifestError {
  std::string path;
  std::size_t line = 0;  // 1-based, 0 when not tied to a line
  std::string message;

  std::string describe() const;
};

// Where a set's members come from: an explicit list or a table column
// (deduplicated in first-seen row order).
struct SetEntry {
  std::string name;
  std::vector<std::string> members;  // inline form
  std::string table;                 // column form
  std::string column;

  bool is_inline() const { return table.empty(); }
};

// Where a parameter's values come from. Exactly one of the two forms:
//   table + key_columns (as many as index_sets; 0 = single-row scalar) +
//   value_column
//   inline values (scalar, or key(s)+value tuples for indexed parameters)
// `index_sets` names the manifest sets spanning the parameter's domain; it is
// required for indexed parameters (the completeness check walks the full
// member product) and must be absent for scalars.
struct ParamEntry {
  std::string name;
  std::vector<std::string> index_sets;  // size 0..2

  // table form
  std::string table;
  std::vector<std::string> key_columns;  // size == index_sets.size()
  std::string value_column;

  // inline form
  bool has_inline = false;
  double inline_scalar = 0.0;                         // arity 0
  std::vector<std::vector<std::string>> inline_rows;  // arity 1-2: keys + value

  bool has_default = false;
  double default_value = 0.0;

  bool is_inline() const { return has_inline; }
  std::size_t arity() const { return index_sets.size(); }
};

struct BindingManifest {
  std::vector<SetEntry> sets;
  std::vector<ParamEntry> params;

  const SetEntry* find_set(const std::string& name) const;
  const ParamEntry* find_param(const std::string& name) const;
};

// Structured-text config: `[set NAME]` / `[param NAME]` section headers, one
// `key = value` pair per line, `#` comments. Recognized keys:
//   set:   members = A B C            (inline member list)
//          table = products           (with column = <column name>)
//   param: table / key_columns / value_column   (comma-separated columns)
//          index_sets = S or R, P     (required when arity > 0)
//          value = 10                 (inline scalar)
//          values = A 10  B 15        (inline tuples, arity keys then value)
//          default = 0                (fills missing member combinations)
// Unknown keys, duplicate sections, and malformed values are errors.
Result<BindingManifest, ManifestError> parse_manifest(const std::string& text,
                                                      const std::string& path = "<string>");
Result<BindingManifest, ManifestError> load_manifest(const std::string& path);

}  // namespace exeos::databind
