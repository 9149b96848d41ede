#include "exeos/databind/bind.hpp"

#include <algorithm>
#include <cmath>

namespace exeos::databind {

std::string_view to_string(BindErrorKind kind) {
  switch (kind) {
    case BindErrorKind::UnknownParameter: return "unknown-parameter";
    case BindErrorKind::ArityMismatch: return "arity-mismatch";
    case BindErrorKind::MissingMemberValue: return "missing-member-value";
    case BindErrorKind::DuplicateKey: return "duplicate-key";
    case BindErrorKind::UnknownSymbol: return "unknown-symbol";
    case BindErrorKind::SymbolicValue: return "symbolic-value";
  }
  return "?";
}

std::string BindError::describe() const {
  std::string out = "bind error [";
  out += to_string(kind);
  out += "]";
  if (!symbol.empty()) out += " " + symbol;
  out += ": " + message;
  return out;
}

const BoundSet* BoundData::find_set(const std::string& name) const {
  for (const auto& s : sets)
    if (s.name == name) return &s;
  return nullptr;
}

const BoundParam* BoundData::find_param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<llm::SymbolMeta> meta_from_manifest(const BindingManifest& manifest) {
  std::vector<llm::SymbolMeta> meta;
  for (const auto& entry : manifest.params) {
    llm::SymbolMeta m;
    m.name = entry.name;
    m.kind = llm::SymbolKind::Parameter;
    m.dimension = entry.arity() == 0   ? llm::Dimension::Scalar
                  : entry.arity() == 1 ? llm::Dimension::OneDimensional
                                       : llm::Dimension::TwoDimensional;
    m.description = entry.is_inline() ? "inline value"
                                      : "bound from table " + entry.table;
    meta.push_back(std::move(m));
  }
  return meta;
}

namespace {

std::size_t dimension_arity(llm::Dimension d) {
  switch (d) {
    case llm::Dimension::Scalar: return 0;
    case llm::Dimension::OneDimensional: return 1;
    case llm::Dimension::TwoDimensional: return 2;
  }
  return 0;
}

// (key tuple, value) triples collected from either source form before the
// completeness walk.
struct Triple {
  std::string k1, k2;
  double value = 0.0;
};

Result<BoundSet, BindError> resolve_set(const SetEntry& entry,
                                        const TableSet& tables) {
  BoundSet set;
  set.name = entry.name;
  if (entry.is_inline()) {
    for (const auto& m : entry.members) {
      if (std::find(set.members.begin(), set.members.end(), m) !=
          set.members.end())
        return BindError{BindErrorKind::DuplicateKey, entry.name,
                         "inline member `" + m + "` listed twice"};
      set.members.push_back(m);
    }
    return set;
  }
  const Table* table = tables.find(entry.table);
  if (!table)
    return BindError{BindErrorKind::UnknownSymbol, entry.name,
                     "table `" + entry.table + "` not loaded"};
  const Column* column = table->find_column(entry.column);
  if (!column)
    return BindError{BindErrorKind::UnknownSymbol, entry.name,
                     "table `" + entry.table + "` has no column `" +
                         entry.column + "`"};
  for (const auto& cell : column->cells)
    if (std::find(set.members.begin(), set.members.end(), cell) ==
        set.members.end())
      set.members.push_back(cell);
  return set;
}

}  // namespace

Result<BoundData, BindError> bind(const BindingManifest& manifest,
                                  const std::vector<llm::SymbolMeta>& meta,
                                  const TableSet& tables) {
  BoundData data;
  for (const auto& entry : manifest.sets) {
    auto set = resolve_set(entry, tables);
    if (!set) return set.error();
    data.sets.push_back(std::move(*set));
  }

  for (const auto& entry : manifest.params) {
    const llm::SymbolMeta* symbol = nullptr;
    for (const auto& m : meta)
      if (m.kind == llm::SymbolKind::Parameter && m.name == entry.name)
        symbol = &m;
    if (!symbol)
      return BindError{BindErrorKind::UnknownParameter, entry.name,
                       "no parameter metadata with this name"};
    if (dimension_arity(symbol->dimension) != entry.arity())
      return BindError{
          BindErrorKind::ArityMismatch, entry.name,
          "manifest binds " + std::to_string(entry.arity()) +
              " key(s) but the parameter is declared " +
              std::string(llm::to_string(symbol->dimension))};

    BoundParam param;
    param.name = entry.name;
    param.arity = entry.arity();
    param.index_sets = entry.index_sets;

    const BoundSet* s1 = nullptr;
    const BoundSet* s2 = nullptr;
    if (param.arity >= 1) {
      s1 = data.find_set(entry.index_sets[0]);
      if (!s1)
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "index set `" + entry.index_sets[0] +
                             "` is not in the manifest"};
    }
    if (param.arity == 2) {
      s2 = data.find_set(entry.index_sets[1]);
      if (!s2)
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "index set `" + entry.index_sets[1] +
                             "` is not in the manifest"};
    }

    if (param.arity == 0) {
      if (entry.is_inline()) {
        param.scalar = entry.inline_scalar;
        param.provenance = "inline scalar";
      } else {
        const Table* table = tables.find(entry.table);
        if (!table)
          return BindError{BindErrorKind::UnknownSymbol, entry.name,
                           "table `" + entry.table + "` not loaded"};
        const Column* value_col = table->find_column(entry.value_column);
        if (!value_col)
          return BindError{BindErrorKind::UnknownSymbol, entry.name,
                           "table `" + entry.table + "` has no column `" +
                               entry.value_column + "`"};
        if (value_col->cells.size() != 1)
          return BindError{BindErrorKind::DuplicateKey, entry.name,
                           "scalar bound to a column with " +
                               std::to_string(value_col->cells.size()) +
                               " rows"};
        auto v = parse_double(value_col->cells[0]);
        if (!v || !std::isfinite(*v))
          return BindError{BindErrorKind::SymbolicValue, entry.name,
                           "cell \"" + value_col->cells[0] +
                               "\" is not numeric"};
        param.scalar = *v;
        param.provenance = "table " + entry.table + ", column " +
                           entry.value_column;
      }
      data.params.push_back(std::move(param));
      continue;
    }

    // Indexed: collect triples, then walk the member product.
    std::vector<Triple> triples;
    auto add_triple = [&](const std::string& k1, const std::string& k2,
                          const std::string& cell,
                          const std::string& where) -> std::optional<BindError> {
      if (std::find(s1->members.begin(), s1->members.end(), k1) ==
          s1->members.end())
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "key `" + k1 + "` (" + where + ") is not a member of " +
                             entry.index_sets[0]};
      if (param.arity == 2 &&
          std::find(s2->members.begin(), s2->members.end(), k2) ==
              s2->members.end())
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "key `" + k2 + "` (" + where + ") is not a member of " +
                             entry.index_sets[1]};
      for (const auto& t : triples)
        if (t.k1 == k1 && t.k2 == k2) {
          std::string key = param.arity == 2 ? "(" + k1 + ", " + k2 + ")"
                                             : "`" + k1 + "`";
          return BindError{BindErrorKind::DuplicateKey, entry.name,
                           "two values for key " + key + " (" + where + ")"};
        }
      auto v = parse_double(cell);
      if (!v || !std::isfinite(*v))
        return BindError{BindErrorKind::SymbolicValue, entry.name,
                         "cell \"" + cell + "\" (" + where +
                             ") is not numeric"};
      triples.push_back({k1, k2, *v});
      return std::nullopt;
    };

    if (entry.is_inline()) {
      param.provenance = "inline values";
      for (const auto& row : entry.inline_rows) {
        auto err = add_triple(row[0], param.arity == 2 ? row[1] : "",
                              row.back(), "inline");
        if (err) return *err;
      }
    } else {
      param.provenance = "table " + entry.table + ", column " +
                         entry.value_column;
      const Table* table = tables.find(entry.table);
      if (!table)
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "table `" + entry.table + "` not loaded"};
      const Column* value_col = table->find_column(entry.value_column);
      if (!value_col)
        return BindError{BindErrorKind::UnknownSymbol, entry.name,
                         "table `" + entry.table + "` has no column `" +
                             entry.value_column + "`"};
      std::vector<const Column*> keys;
      for (const auto& name : entry.key_columns) {
        const Column* col = table->find_column(name);
        if (!col)
          return BindError{BindErrorKind::UnknownSymbol, entry.name,
                           "table `" + entry.table + "` has no column `" +
                               name + "`"};
        keys.push_back(col);
      }
      for (std::size_t r = 0; r < table->rows(); ++r) {
        std::string where = "table " + entry.table + " row " +
                            std::to_string(r + 2);  // header is line 1
        auto err = add_triple(keys[0]->cells[r],
                              param.arity == 2 ? keys[1]->cells[r] : "",
                              value_col->cells[r], where);
        if (err) return *err;
      }
    }

    auto lookup = [&](const std::string& k1,
                      const std::string& k2) -> const Triple* {
      for (const auto& t : triples)
        if (t.k1 == k1 && t.k2 == k2) return &t;
      return nullptr;
    };

    if (param.arity == 1) {
      for (const auto& m : s1->members) {
        const Triple* t = lookup(m, "");
        if (t) {
          param.one_d.emplace_back(m, t->value);
        } else if (entry.has_default) {
          param.one_d.emplace_back(m, entry.default_value);
        } else {
          return BindError{BindErrorKind::MissingMemberValue, entry.name,
                           "no value for member `" + m + "` of " +
                               entry.index_sets[0] + " and no default"};
        }
      }
    } else {
      param.two_d.row_keys = s1->members;
      param.two_d.col_keys = s2->members;
      for (const auto& r : s1->members)
        for (const auto& c : s2->members) {
          const Triple* t = lookup(r, c);
          if (t) {
            param.two_d.values.push_back(t->value);
          } else if (entry.has_default) {
            param.two_d.values.push_back(entry.default_value);
          } else {
            return BindError{BindErrorKind::MissingMemberValue, entry.name,
                             "no value for (" + r + ", " + c +
                                 ") and no default"};
          }
        }
    }
    data.params.push_back(std::move(param));
  }

  return data;
}

}  // namespace exeos::databind
