#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::ampl {

// ---------------------------------------------------------------------------
// Expressions
//
// The subset is affine-after-folding: literals, parameter/variable references
// (with 0-2 subscripts), indexed sums, + - * and unary minus. Anything that
// leaves a product of two variable references survives to instantiation and
// is rejected there as nonlinear.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprOp { Number, Ref, Sum, Add, Sub, Mul, Neg };

struct Expr {
  ExprOp op = ExprOp::Number;
  double number = 0.0;                   // Number
  std::string name;                      // Ref: symbol; Sum: bound index name
  std::vector<std::string> subscripts;   // Ref: index names used as subscripts
  std::string set_name;                  // Sum: the set iterated over
  ExprPtr lhs, rhs;                      // Add/Sub/Mul; Sum/Neg use lhs only
  SourceLoc loc;
};

ExprPtr make_number(double v, SourceLoc loc = {});
ExprPtr make_ref(std::string name, std::vector<std::string> subs, SourceLoc loc = {});
ExprPtr make_sum(std::string index, std::string set, ExprPtr body, SourceLoc loc = {});
ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_neg(ExprPtr operand, SourceLoc loc = {});

bool expr_equal(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

// One {..} slot of an indexed declaration. `index_name` is empty for the bare
// form `param unit {RESOURCES, PRODUCTS}`, nonempty for `var x {p in PRODUCTS}`.
struct IndexBinding {
  std::string index_name;
  std::string set_name;

  friend bool operator==(const IndexBinding&, const IndexBinding&) = default;
};

struct SetDecl {
  std::string name;
  SourceLoc loc;
};

struct ParamDecl {
  std::string name;
  std::vector<IndexBinding> index_sets;  // 0..2
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  SourceLoc loc;
};

enum class Integrality { Continuous, Integer, Binary };

struct VarDecl {
  std::string name;
  std::vector<IndexBinding> index_sets;  // 0..1
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  Integrality integrality = Integrality::Continuous;
  SourceLoc loc;
};

enum class Relation { Le, Eq, Ge };

std::string_view to_string(Relation rel);

struct ConstraintDecl {
  std::string name;
  std::vector<IndexBinding> index_sets;  // 0..1
  ExprPtr lhs;
  Relation relation = Relation::Le;
  ExprPtr rhs;
  SourceLoc loc;
};

enum class ObjectiveSense { Maximize, Minimize };

struct ObjectiveDecl {
  std::string name;
  ObjectiveSense sense = ObjectiveSense::Minimize;
  ExprPtr expr;
  SourceLoc loc;
};

struct AmplModelAst {
  std::vector<SetDecl> sets;
  std::vector<ParamDecl> params;
  std::vector<VarDecl> vars;
  std::vector<ConstraintDecl> constraints;
  std::vector<ObjectiveDecl> objectives;  // declaration order matters
};

// Structural equality up to source locations (round-trip tests compare these).
bool ast_equal(const AmplModelAst& a, const AmplModelAst& b);

// ---------------------------------------------------------------------------
// Data documents
// ---------------------------------------------------------------------------

struct TwoDTable {
  std::vector<std::string> row_keys;
  std::vector<std::string> col_keys;
  std::vector<double> values;  // row-major, row_keys.size() * col_keys.size()

  double at(std::size_t r, std::size_t c) const {
    return values[r * col_keys.size() + c];
  }
  const double* at(const std::string& row, const std::string& col) const {
    for (std::size_t r = 0; r < row_keys.size(); ++r)
      if (row_keys[r] == row)
        for (std::size_t c = 0; c < col_keys.size(); ++c)
          if (col_keys[c] == col) return &values[r * col_keys.size() + c];
    return nullptr;
  }
  friend bool operator==(const TwoDTable&, const TwoDTable&) = default;
};

struct OneDValues {
  // Appearance order preserved; keys unique (duplicates rejected at parse).
  std::vector<std::pair<std::string, double>> entries;

  const double* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  friend bool operator==(const OneDValues&, const OneDValues&) = default;
};

using ParamValue = std::variant<double, OneDValues, TwoDTable>;

struct DataSection {
  // name -> ordered member list; appearance order fixes grounding order.
  std::vector<std::pair<std::string, std::vector<std::string>>> set_values;
  std::vector<std::pair<std::string, ParamValue>> param_values;

  const std::vector<std::string>* find_set(const std::string& name) const;
  const ParamValue* find_param(const std::string& name) const;

  friend bool operator==(const DataSection&, const DataSection&) = default;
};

}  // namespace exeos::ampl
