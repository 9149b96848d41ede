#include "exeos/ampl/render.hpp"

#include "exeos/common.hpp"

namespace exeos::ampl {

namespace {

// Rendering context, ordered by how tightly the surrounding syntax binds.
enum Ctx { kTop = 0, kSumBody = 1, kMulLhs = 2, kFactor = 3 };

void render(const Expr& e, Ctx ctx, std::string& out) {
  auto paren = [&](bool need, auto&& body) {
    if (need) out += '(';
    body();
    if (need) out += ')';
  };
  switch (e.op) {
    case ExprOp::Number:
      out += format_double(e.number);
      break;
    case ExprOp::Ref:
      out += e.name;
      if (!e.subscripts.empty()) {
        out += '[';
        for (std::size_t i = 0; i < e.subscripts.size(); ++i) {
          if (i) out += ',';
          out += e.subscripts[i];
        }
        out += ']';
      }
      break;
    case ExprOp::Add:
    case ExprOp::Sub:
      paren(ctx >= kSumBody, [&] {
        render(*e.lhs, kTop, out);
        out += e.op == ExprOp::Add ? " + " : " - ";
        render(*e.rhs, kSumBody, out);
      });
      break;
    case ExprOp::Mul:
      paren(ctx >= kFactor, [&] {
        render(*e.lhs, kMulLhs, out);
        out += " * ";
        render(*e.rhs, kFactor, out);
      });
      break;
    case ExprOp::Sum:
      paren(ctx >= kMulLhs, [&] {
        out += "sum {" + e.name + " in " + e.set_name + "} ";
        render(*e.lhs, kSumBody, out);
      });
      break;
    case ExprOp::Neg:
      out += '-';
      render(*e.lhs, kFactor, out);
      break;
  }
}

std::string index_block(const std::vector<IndexBinding>& bindings) {
  if (bindings.empty()) return "";
  std::string out = " {";
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (i) out += ", ";
    const auto& b = bindings[i];
    if (!b.index_name.empty()) out += b.index_name + " in ";
    out += b.set_name;
  }
  out += '}';
  return out;
}

std::string bounds(const std::optional<double>& lower,
                   const std::optional<double>& upper) {
  std::string out;
  if (lower) out += " >= " + format_double(*lower);
  if (upper) out += " <= " + format_double(*upper);
  return out;
}

}  // namespace

std::string render_expr(const Expr& expr) {
  std::string out;
  render(expr, kTop, out);
  return out;
}

std::string render_model(const AmplModelAst& ast) {
  std::string out;
  for (const auto& s : ast.sets) out += "set " + s.name + ";\n";
  for (const auto& p : ast.params)
    out += "param " + p.name + index_block(p.index_sets) +
           bounds(p.lower_bound, p.upper_bound) + ";\n";
  for (const auto& v : ast.vars) {
    out += "var " + v.name + index_block(v.index_sets) +
           bounds(v.lower_bound, v.upper_bound);
    if (v.integrality == Integrality::Integer) out += " integer";
    if (v.integrality == Integrality::Binary) out += " binary";
    out += ";\n";
  }
  for (const auto& c : ast.constraints) {
    out += "subject to " + c.name + index_block(c.index_sets) + ": " +
           render_expr(*c.lhs);
    switch (c.relation) {
      case Relation::Le: out += " <= "; break;
      case Relation::Eq: out += " = "; break;
      case Relation::Ge: out += " >= "; break;
    }
    out += render_expr(*c.rhs) + ";\n";
  }
  for (const auto& o : ast.objectives)
    out += (o.sense == ObjectiveSense::Maximize ? "maximize " : "minimize ") +
           o.name + ": " + render_expr(*o.expr) + ";\n";
  return out;
}

std::string render_data(const DataSection& data) {
  std::string out;
  for (const auto& [name, members] : data.set_values) {
    out += "set " + name + " :=";
    for (const auto& m : members) out += ' ' + m;
    out += ";\n";
  }
  for (const auto& [name, value] : data.param_values) {
    if (const double* scalar = std::get_if<double>(&value)) {
      out += "param " + name + " := " + format_double(*scalar) + ";\n";
    } else if (const OneDValues* vals = std::get_if<OneDValues>(&value)) {
      out += "param " + name + " :=";
      for (const auto& [key, v] : vals->entries)
        out += ' ' + key + ' ' + format_double(v);
      out += ";\n";
    } else {
      const TwoDTable& t = std::get<TwoDTable>(value);
      out += "param " + name + " :";
      for (const auto& c : t.col_keys) out += ' ' + c;
      out += t.row_keys.empty() ? " :=;\n" : " :=\n";
      for (std::size_t r = 0; r < t.row_keys.size(); ++r) {
        out += "  " + t.row_keys[r];
        for (std::size_t c = 0; c < t.col_keys.size(); ++c)
          out += ' ' + format_double(t.values[r * t.col_keys.size() + c]);
        out += r + 1 == t.row_keys.size() ? ";\n" : "\n";
      }
    }
  }
  return out;
}

}  // namespace exeos::ampl
