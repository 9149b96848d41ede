#pragma once

#include <string>
#include <vector>

#include "exeos/ampl/ast.hpp"
#include "exeos/common.hpp"
#include "exeos/databind/manifest.hpp"
#include "exeos/databind/tables.hpp"
#include "exeos/llm/structured.hpp"

namespace exeos::databind {

enum class BindErrorKind {
  UnknownParameter,   // manifest names a parameter absent from the metadata
  ArityMismatch,      // key columns / index sets disagree with the dimension
  MissingMemberValue, // a member combination has no value and no default
  DuplicateKey,       // two source rows map to the same key tuple
  UnknownSymbol,      // a table, column, set, or member fails to resolve
  SymbolicValue,      // non-numeric cell bound to a numeric parameter
};

std::string_view to_string(BindErrorKind kind);

struct BindError {
  BindErrorKind kind = BindErrorKind::UnknownSymbol;
  std::string symbol;  // parameter/set/table name involved
  std::string message;

  std::string describe() const;
};

struct BoundSet {
  std::string name;
  std::vector<std::string> members;

  friend bool operator==(const BoundSet&, const BoundSet&) = default;
};

// Values are stored complete (defaults already applied) in index-set member
// order, so emitters never need the manifest again. `index_sets` and
// `provenance` are bookkeeping and excluded from equality: the generic-data
// document does not carry them, and round-trip tests compare values.
struct BoundParam {
  std::string name;
  std::size_t arity = 0;  // 0, 1, or 2
  double scalar = 0.0;
  std::vector<std::pair<std::string, double>> one_d;
  ampl::TwoDTable two_d;

  std::vector<std::string> index_sets;
  std::string provenance;

  friend bool operator==(const BoundParam& a, const BoundParam& b) {
    return a.name == b.name && a.arity == b.arity &&
           (a.arity != 0 || a.scalar == b.scalar) &&
           (a.arity != 1 || a.one_d == b.one_d) &&
           (a.arity != 2 || a.two_d == b.two_d);
  }
};

struct BoundData {
  std::vector<BoundSet> sets;
  std::vector<BoundParam> params;

  const BoundSet* find_set(const std::string& name) const;
  const BoundParam* find_param(const std::string& name) const;

  friend bool operator==(const BoundData&, const BoundData&) = default;
};

// Resolves every manifest entry against the tables, checks arity against the
// symbol metadata, walks the full member product of each indexed parameter
// (gaps filled by the entry's default or reported as MissingMemberValue), and
// rejects symbolic cells in value columns outright.
Result<BoundData, BindError> bind(const BindingManifest& manifest,
                                  const std::vector<llm::SymbolMeta>& meta,
                                  const TableSet& tables);

// Metadata matching the manifest exactly (names + arities), for pipelines
// that skip the structuring step and have no model-derived symbol list.
std::vector<llm::SymbolMeta> meta_from_manifest(const BindingManifest& manifest);

// Bridges to the DSL layer. emit_ampl_data renders through the DSL data
// grammar, so parse_data(emit_ampl_data(d)) reproduces the same values and
// member order.
ampl::DataSection to_data_section(const BoundData& data);
BoundData from_data_section(const ampl::DataSection& section);
std::string emit_ampl_data(const BoundData& data);

// Keyed-document form for the external runtime: {"sets": {...}, "params":
// {...}}, two-space indent, keys in first-seen order, scalars as numbers,
// 1-D parameters as key->value maps, 2-D as row->col->value nested maps.
std::string emit_generic_data(const BoundData& data);
Result<BoundData, IngestError> read_generic_data(const std::string& text);

}  // namespace exeos::databind
