#include "exeos/ampl/ast.hpp"

namespace exeos::ampl {

ExprPtr make_number(double v, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Number;
  e->number = v;
  e->loc = loc;
  return e;
}

ExprPtr make_ref(std::string name, std::vector<std::string> subs, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Ref;
  e->name = std::move(name);
  e->subscripts = std::move(subs);
  e->loc = loc;
  return e;
}

ExprPtr make_sum(std::string index, std::string set, ExprPtr body, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Sum;
  e->name = std::move(index);
  e->set_name = std::move(set);
  e->lhs = std::move(body);
  e->loc = loc;
  return e;
}

ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->loc = loc;
  return e;
}

ExprPtr make_neg(ExprPtr operand, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Neg;
  e->lhs = std::move(operand);
  e->loc = loc;
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Number:
      return a.number == b.number;
    case ExprOp::Ref:
      return a.name == b.name && a.subscripts == b.subscripts;
    case ExprOp::Sum:
      return a.name == b.name && a.set_name == b.set_name &&
             expr_equal(*a.lhs, *b.lhs);
    case ExprOp::Neg:
      return expr_equal(*a.lhs, *b.lhs);
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
      return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::Le: return "<=";
    case Relation::Eq: return "=";
    case Relation::Ge: return ">=";
  }
  return "?";
}

namespace {

bool expr_ptr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

}  // namespace

bool ast_equal(const AmplModelAst& a, const AmplModelAst& b) {
  if (a.sets.size() != b.sets.size() || a.params.size() != b.params.size() ||
      a.vars.size() != b.vars.size() ||
      a.constraints.size() != b.constraints.size() ||
      a.objectives.size() != b.objectives.size())
    return false;
  for (std::size_t i = 0; i < a.sets.size(); ++i)
    if (a.sets[i].name != b.sets[i].name) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& x = a.params[i];
    const auto& y = b.params[i];
    if (x.name != y.name || x.index_sets != y.index_sets ||
        x.lower_bound != y.lower_bound || x.upper_bound != y.upper_bound)
      return false;
  }
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const auto& x = a.vars[i];
    const auto& y = b.vars[i];
    if (x.name != y.name || x.index_sets != y.index_sets ||
        x.lower_bound != y.lower_bound || x.upper_bound != y.upper_bound ||
        x.integrality != y.integrality)
      return false;
  }
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& x = a.constraints[i];
    const auto& y = b.constraints[i];
    if (x.name != y.name || x.index_sets != y.index_sets ||
        x.relation != y.relation || !expr_ptr_equal(x.lhs, y.lhs) ||
        !expr_ptr_equal(x.rhs, y.rhs))
      return false;
  }
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    const auto& x = a.objectives[i];
    const auto& y = b.objectives[i];
    if (x.name != y.name || x.sense != y.sense || !expr_ptr_equal(x.expr, y.expr))
      return false;
  }
  return true;
}

const std::vector<std::string>* DataSection::find_set(const std::string& name) const {
  for (const auto& [n, members] : set_values)
    if (n == name) return &members;
  return nullptr;
}

const ParamValue* DataSection::find_param(const std::string& name) const {
  for (const auto& [n, v] : param_values)
    if (n == name) return &v;
  return nullptr;
}

}  // namespace exeos::ampl
