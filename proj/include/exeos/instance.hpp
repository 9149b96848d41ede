#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exeos/ampl/ast.hpp"

namespace exeos {

// Grounded sparse LP/MILP. Variable ids index `variables`; rows hold sparse
// coefficient lists sorted by variable id.
struct InstanceVar {
  std::uint32_t id = 0;
  std::string name;  // family name with subscripts, e.g. "x[A]"
  std::optional<double> lower;
  std::optional<double> upper;
  ampl::Integrality integrality = ampl::Integrality::Continuous;
};

struct RowCoeff {
  std::uint32_t var = 0;
  double value = 0.0;
};

struct InstanceRow {
  std::string name;
  std::vector<RowCoeff> coeffs;
  ampl::Relation relation = ampl::Relation::Le;
  double rhs = 0.0;
};

struct InstanceObjective {
  ampl::ObjectiveSense sense = ampl::ObjectiveSense::Maximize;
  std::vector<double> coeffs;  // dense, indexed by variable id
  double constant = 0.0;
};

struct ProblemInstance {
  std::vector<InstanceVar> variables;
  InstanceObjective objective;
  std::vector<InstanceRow> rows;
  // Instance-level name -> AST-level declaration name.
  std::map<std::string, std::string> provenance;

  bool has_integer_vars() const {
    for (const auto& v : variables)
      if (v.integrality != ampl::Integrality::Continuous) return true;
    return false;
  }
  const InstanceVar* find_variable(const std::string& name) const {
    for (const auto& v : variables)
      if (v.name == name) return &v;
    return nullptr;
  }
};

}  // namespace exeos
