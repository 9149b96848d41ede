#include "exeos/ampl/instantiate.hpp"

#include <unordered_map>

namespace exeos::ampl {

namespace {

struct InstantiateFailure {
  CompileError error;
};

[[noreturn]] void fail(CompileErrorKind kind, SourceLoc loc, std::string symbol,
                       std::string message) {
  throw InstantiateFailure{
      {kind, loc, std::move(symbol), std::move(message)}};
}

std::string instance_name(const std::string& family,
                          const std::vector<std::string>& subs) {
  if (subs.empty()) return family;
  std::string out = family + '[';
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (i) out += ',';
    out += subs[i];
  }
  return out + ']';
}

// Linear form over instance variables: constant + sum coeff[var]*var.
struct LinExpr {
  double constant = 0.0;
  std::map<std::uint32_t, double> coeffs;

  bool is_constant() const { return coeffs.empty(); }
  void add(const LinExpr& o, double scale) {
    constant += scale * o.constant;
    for (const auto& [v, c] : o.coeffs) {
      double& slot = coeffs[v];
      slot += scale * c;
    }
  }
  void scale(double s) {
    constant *= s;
    for (auto& [v, c] : coeffs) c *= s;
  }
};

class Grounder {
 public:
  Grounder(const AmplModelAst& ast, const DataSection& data,
           const ObjectivePolicy& policy)
      : ast_(ast), data_(data), policy_(policy) {}

  ProblemInstance run() {
    collect_declarations();
    build_variables();
    build_rows();
    build_objective();
    return std::move(out_);
  }

 private:
  const AmplModelAst& ast_;
  const DataSection& data_;
  const ObjectivePolicy& policy_;
  ProblemInstance out_;

  std::unordered_map<std::string, const std::vector<std::string>*> members_;
  std::unordered_map<std::string, const ParamDecl*> params_;
  std::unordered_map<std::string, const VarDecl*> vars_;
  // (family name, joined subscripts) -> instance var id
  std::map<std::pair<std::string, std::string>, std::uint32_t> var_ids_;

  using Env = std::map<std::string, std::string>;  // index name -> member

  static const std::vector<std::string>& empty_members() {
    static const std::vector<std::string> empty;
    return empty;
  }

  void collect_declarations() {
    for (const auto& s : ast_.sets) {
      const auto* vals = data_.find_set(s.name);
      if (!vals)
        fail(CompileErrorKind::UnresolvedSymbol, s.loc, s.name,
             "set '" + s.name + "' has no data");
      members_[s.name] = vals;
    }
    for (const auto& p : ast_.params) params_[p.name] = &p;
    for (const auto& v : ast_.vars) vars_[v.name] = &v;
  }

  const std::vector<std::string>& members_of(const std::string& set_name,
                                             SourceLoc loc) {
    auto it = members_.find(set_name);
    if (it == members_.end())
      fail(CompileErrorKind::UnresolvedSymbol, loc, set_name,
           "set '" + set_name + "' has no data");
    return *it->second;
  }

  void build_variables() {
    for (const auto& decl : ast_.vars) {
      std::optional<double> lower = decl.lower_bound;
      std::optional<double> upper = decl.upper_bound;
      if (decl.integrality == Integrality::Binary) {
        lower = std::max(lower.value_or(0.0), 0.0);
        upper = std::min(upper.value_or(1.0), 1.0);
      }
      auto push = [&](const std::vector<std::string>& subs) {
        InstanceVar v;
        v.id = static_cast<std::uint32_t>(out_.variables.size());
        v.name = instance_name(decl.name, subs);
        v.lower = lower;
        v.upper = upper;
        v.integrality = decl.integrality;
        var_ids_[{decl.name, join(subs)}] = v.id;
        out_.provenance[v.name] = decl.name;
        out_.variables.push_back(std::move(v));
      };
      if (decl.index_sets.empty()) {
        push({});
      } else {
        for (const auto& m :
             members_of(decl.index_sets[0].set_name, decl.loc))
          push({m});
      }
    }
  }

  static std::string join(const std::vector<std::string>& subs) {
    std::string out;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (i) out += ',';
      out += subs[i];
    }
    return out;
  }

  double param_value(const ParamDecl& decl,
                     const std::vector<std::string>& subs, SourceLoc loc) {
    const auto* value = data_.find_param(decl.name);
    if (!value)
      fail(CompileErrorKind::UnresolvedSymbol, loc, decl.name,
           "parameter '" + decl.name + "' has no data");
    switch (subs.size()) {
      case 0:
        if (const double* s = std::get_if<double>(value)) return *s;
        break;
      case 1:
        if (const OneDValues* vals = std::get_if<OneDValues>(value)) {
          if (const double* v = vals->find(subs[0])) return *v;
          fail(CompileErrorKind::UnresolvedSymbol, loc, decl.name,
               "parameter '" + decl.name + "' has no value for '" + subs[0] +
                   "'");
        }
        break;
      default:
        if (const TwoDTable* t = std::get_if<TwoDTable>(value)) {
          if (const double* v = t->at(subs[0], subs[1])) return *v;
          fail(CompileErrorKind::UnresolvedSymbol, loc, decl.name,
               "parameter '" + decl.name + "' has no value for '" + subs[0] +
                   "," + subs[1] + "'");
        }
        break;
    }
    fail(CompileErrorKind::ArityMismatch, loc, decl.name,
         "parameter '" + decl.name + "' data does not match its arity");
  }

  LinExpr eval(const Expr& e, const Env& env) {
    LinExpr out;
    switch (e.op) {
      case ExprOp::Number:
        out.constant = e.number;
        return out;
      case ExprOp::Ref: {
        std::vector<std::string> subs;
        subs.reserve(e.subscripts.size());
        for (const auto& s : e.subscripts) {
          auto it = env.find(s);
          if (it == env.end())
            fail(CompileErrorKind::UnresolvedSymbol, e.loc, s,
                 "subscript '" + s + "' is not bound here");
          subs.push_back(it->second);
        }
        if (auto pit = params_.find(e.name); pit != params_.end()) {
          out.constant = param_value(*pit->second, subs, e.loc);
          return out;
        }
        if (vars_.contains(e.name)) {
          auto vit = var_ids_.find({e.name, join(subs)});
          if (vit == var_ids_.end())
            fail(CompileErrorKind::UnresolvedSymbol, e.loc, e.name,
                 "variable '" + instance_name(e.name, subs) +
                     "' is not instantiated");
          out.coeffs[vit->second] = 1.0;
          return out;
        }
        fail(CompileErrorKind::UnresolvedSymbol, e.loc, e.name,
             "'" + e.name + "' is not a declared parameter or variable");
      }
      case ExprOp::Sum: {
        Env inner = env;
        for (const auto& m : members_of(e.set_name, e.loc)) {
          inner[e.name] = m;
          out.add(eval(*e.lhs, inner), 1.0);
        }
        return out;
      }
      case ExprOp::Add:
        out = eval(*e.lhs, env);
        out.add(eval(*e.rhs, env), 1.0);
        return out;
      case ExprOp::Sub:
        out = eval(*e.lhs, env);
        out.add(eval(*e.rhs, env), -1.0);
        return out;
      case ExprOp::Neg:
        out = eval(*e.lhs, env);
        out.scale(-1.0);
        return out;
      case ExprOp::Mul: {
        LinExpr lhs = eval(*e.lhs, env);
        LinExpr rhs = eval(*e.rhs, env);
        if (!lhs.is_constant() && !rhs.is_constant())
          fail(CompileErrorKind::NonlinearExpression, e.loc, "",
               "product of two variable expressions is not linear");
        if (lhs.is_constant()) {
          rhs.scale(lhs.constant);
          return rhs;
        }
        lhs.scale(rhs.constant);
        return lhs;
      }
    }
    return out;
  }

  void build_rows() {
    for (const auto& decl : ast_.constraints) {
      auto push = [&](const Env& env, const std::vector<std::string>& subs) {
        LinExpr lhs = eval(*decl.lhs, env);
        lhs.add(eval(*decl.rhs, env), -1.0);
        InstanceRow row;
        row.name = instance_name(decl.name, subs);
        row.relation = decl.relation;
        row.rhs = -lhs.constant;
        for (const auto& [v, c] : lhs.coeffs)
          if (c != 0.0) row.coeffs.push_back({v, c});
        out_.provenance[row.name] = decl.name;
        out_.rows.push_back(std::move(row));
      };
      if (decl.index_sets.empty()) {
        push({}, {});
      } else {
        const auto& binding = decl.index_sets[0];
        for (const auto& m : members_of(binding.set_name, decl.loc)) {
          Env env;
          if (!binding.index_name.empty()) env[binding.index_name] = m;
          push(env, {m});
        }
      }
    }
  }

  const ObjectiveDecl* find_objective(const std::string& name) {
    for (const auto& o : ast_.objectives)
      if (o.name == name) return &o;
    return nullptr;
  }

  void build_objective() {
    LinExpr combined;
    ObjectiveSense sense = ObjectiveSense::Maximize;
    switch (policy_.kind) {
      case ObjectivePolicy::Kind::Single: {
        if (ast_.objectives.size() != 1)
          fail(CompileErrorKind::ObjectivePolicy,
               ast_.objectives.empty() ? SourceLoc{}
                                       : ast_.objectives[1].loc,
               "",
               "objective policy 'single' requires exactly one objective, "
               "model declares " +
                   std::to_string(ast_.objectives.size()));
        combined = eval(*ast_.objectives[0].expr, {});
        sense = ast_.objectives[0].sense;
        out_.provenance["objective"] = ast_.objectives[0].name;
        break;
      }
      case ObjectivePolicy::Kind::Lexicographic: {
        const auto& first = ast_.objectives.front();
        combined = eval(*first.expr, {});
        sense = first.sense;
        out_.provenance["objective"] = first.name;
        break;
      }
      case ObjectivePolicy::Kind::Weighted: {
        std::string contributors;
        for (const auto& [name, weight] : policy_.weights) {
          const ObjectiveDecl* decl = find_objective(name);
          if (!decl)
            fail(CompileErrorKind::ObjectivePolicy, SourceLoc{}, name,
                 "weighted objective policy names '" + name +
                     "', which is not a declared objective");
          combined.add(eval(*decl->expr, {}), weight);
          if (!contributors.empty()) contributors += '+';
          contributors += name;
        }
        sense = ObjectiveSense::Maximize;
        out_.provenance["objective"] = contributors;
        break;
      }
    }
    out_.objective.sense = sense;
    out_.objective.constant = combined.constant;
    out_.objective.coeffs.assign(out_.variables.size(), 0.0);
    for (const auto& [v, c] : combined.coeffs) out_.objective.coeffs[v] = c;
  }
};

}  // namespace

Result<ProblemInstance, CompileError> instantiate(
    const AmplModelAst& ast, const DataSection& data,
    const ObjectivePolicy& policy) {
  try {
    return Grounder(ast, data, policy).run();
  } catch (const InstantiateFailure& f) {
    return f.error;
  }
}

}  // namespace exeos::ampl
