#include "exeos/ampl/validate.hpp"

#include <unordered_map>
#include <unordered_set>

namespace exeos::ampl {

namespace {

std::string subscript(const std::string& name,
                      const std::vector<std::string>& keys) {
  std::string out = name + '[';
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ',';
    out += keys[i];
  }
  return out + ']';
}

std::optional<CompileError> check_bounds(const ParamDecl& decl,
                                         const std::string& where,
                                         double value) {
  if (decl.lower_bound && value < *decl.lower_bound)
    return CompileError{CompileErrorKind::BoundViolation, decl.loc, decl.name,
                        where + " = " + format_double(value) +
                            " violates declared bound >= " +
                            format_double(*decl.lower_bound)};
  if (decl.upper_bound && value > *decl.upper_bound)
    return CompileError{CompileErrorKind::BoundViolation, decl.loc, decl.name,
                        where + " = " + format_double(value) +
                            " violates declared bound <= " +
                            format_double(*decl.upper_bound)};
  return std::nullopt;
}

}  // namespace

Result<ValidationReport, CompileError> validate(const AmplModelAst& ast,
                                                const DataSection& data) {
  ValidationReport report;

  std::unordered_map<std::string, const std::vector<std::string>*> members;
  for (const auto& s : ast.sets) {
    const auto* vals = data.find_set(s.name);
    if (!vals)
      return CompileError{CompileErrorKind::UnresolvedSymbol, s.loc, s.name,
                          "set '" + s.name + "' has no data"};
    members[s.name] = vals;
    if (vals->empty())
      report.warnings.push_back("set '" + s.name + "' is empty");
  }

  for (const auto& p : ast.params) {
    const auto* value = data.find_param(p.name);
    if (!value)
      return CompileError{CompileErrorKind::UnresolvedSymbol, p.loc, p.name,
                          "parameter '" + p.name + "' has no data"};
    auto arity_error = [&](std::string_view got) {
      return CompileError{
          CompileErrorKind::ArityMismatch, p.loc, p.name,
          "parameter '" + p.name + "' is declared over " +
              std::to_string(p.index_sets.size()) +
              " index set(s) but its data is " + std::string(got)};
    };
    if (p.index_sets.empty()) {
      const double* scalar = std::get_if<double>(value);
      if (!scalar) {
        return arity_error(std::holds_alternative<OneDValues>(*value)
                               ? "a 1-D list"
                               : "a 2-D table");
      }
      if (auto e = check_bounds(p, p.name, *scalar)) return *e;
    } else if (p.index_sets.size() == 1) {
      const OneDValues* vals = std::get_if<OneDValues>(value);
      if (!vals)
        return arity_error(std::holds_alternative<double>(*value)
                               ? "a scalar"
                               : "a 2-D table");
      const auto& mem = *members.at(p.index_sets[0].set_name);
      std::unordered_set<std::string> mem_set(mem.begin(), mem.end());
      for (const auto& m : mem) {
        const double* v = vals->find(m);
        if (!v)
          return CompileError{CompileErrorKind::UnresolvedSymbol, p.loc,
                              p.name,
                              "parameter '" + p.name + "' has no value for '" +
                                  m + "'"};
        if (auto e = check_bounds(p, subscript(p.name, {m}), *v)) return *e;
      }
      for (const auto& [key, v] : vals->entries)
        if (!mem_set.contains(key))
          report.warnings.push_back("parameter '" + p.name +
                                    "' has a value for '" + key +
                                    "', which is not a member of " +
                                    p.index_sets[0].set_name);
    } else {
      const TwoDTable* table = std::get_if<TwoDTable>(value);
      if (!table)
        return arity_error(std::holds_alternative<double>(*value)
                               ? "a scalar"
                               : "a 1-D list");
      const auto& rows = *members.at(p.index_sets[0].set_name);
      const auto& cols = *members.at(p.index_sets[1].set_name);
      for (const auto& r : rows)
        for (const auto& c : cols) {
          const double* v = table->at(r, c);
          if (!v)
            return CompileError{CompileErrorKind::UnresolvedSymbol, p.loc,
                                p.name,
                                "parameter '" + p.name +
                                    "' has no value for '" + r + "," + c +
                                    "'"};
          if (auto e = check_bounds(p, subscript(p.name, {r, c}), *v))
            return *e;
        }
      std::unordered_set<std::string> row_set(rows.begin(), rows.end());
      std::unordered_set<std::string> col_set(cols.begin(), cols.end());
      for (const auto& r : table->row_keys)
        if (!row_set.contains(r))
          report.warnings.push_back("parameter '" + p.name + "' has row '" +
                                    r + "', which is not a member of " +
                                    p.index_sets[0].set_name);
      for (const auto& c : table->col_keys)
        if (!col_set.contains(c))
          report.warnings.push_back("parameter '" + p.name + "' has column '" +
                                    c + "', which is not a member of " +
                                    p.index_sets[1].set_name);
    }
  }

  std::unordered_set<std::string> declared_sets;
  for (const auto& s : ast.sets) declared_sets.insert(s.name);
  std::unordered_set<std::string> declared_params;
  for (const auto& p : ast.params) declared_params.insert(p.name);
  for (const auto& [name, _] : data.set_values)
    if (!declared_sets.contains(name))
      report.warnings.push_back("data defines set '" + name +
                                "', which the model does not declare");
  for (const auto& [name, _] : data.param_values)
    if (!declared_params.contains(name))
      report.warnings.push_back("data defines parameter '" + name +
                                "', which the model does not declare");
  return report;
}

}  // namespace exeos::ampl
