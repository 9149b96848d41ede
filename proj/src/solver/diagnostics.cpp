#include <algorithm>

#include "exeos/solver/solve.hpp"

namespace exeos::solver {

namespace {

bool still_infeasible(const ProblemInstance& inst,
                      const std::vector<bool>& keep,
                      const SolverParams& params) {
  ProblemInstance sub = inst;
  sub.rows.clear();
  for (std::size_t i = 0; i < inst.rows.size(); ++i)
    if (keep[i]) sub.rows.push_back(inst.rows[i]);
  SolveOutcome out = inst.has_integer_vars() ? solve_milp(sub, params)
                                             : solve_lp(sub, params);
  const RuntimeError* err = std::get_if<RuntimeError>(&out);
  return err && err->kind == RuntimeErrorKind::Infeasible;
}

// Greedy pass: drop each row in turn if the rest stays infeasible. The
// survivors look irreducible but are not guaranteed minimal.
std::vector<std::string> conflict_rows(const ProblemInstance& inst,
                                       const SolverParams& params) {
  std::vector<bool> keep(inst.rows.size(), true);
  if (!still_infeasible(inst, keep, params)) return {};  // bound-driven
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    keep[i] = false;
    if (!still_infeasible(inst, keep, params)) keep[i] = true;
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < inst.rows.size(); ++i)
    if (keep[i]) names.push_back(inst.rows[i].name);
  return names;
}

}  // namespace

std::string render_diagnostics(const SolveOutcome& outcome,
                               const ProblemInstance& instance,
                               const SolverParams& params) {
  const RuntimeError* err = std::get_if<RuntimeError>(&outcome);
  if (!err) return "";

  std::string out = "ERROR ";
  out += to_string(err->kind);
  out += '\n';

  std::vector<std::string> rows = err->rows;
  std::vector<std::string> vars = err->vars;
  std::string sentence;
  switch (err->kind) {
    case RuntimeErrorKind::Infeasible: {
      if (rows.empty() && vars.empty()) rows = conflict_rows(instance, params);
      if (!rows.empty()) {
        sentence =
            "The listed constraints cannot all hold at once; relaxing or "
            "correcting one of them is required for feasibility.";
      } else if (!vars.empty()) {
        sentence =
            "The listed variables have crossed bounds (declared lower bound "
            "exceeds upper bound), so no assignment exists.";
      } else {
        sentence = "The model admits no feasible assignment.";
      }
      break;
    }
    case RuntimeErrorKind::Unbounded:
      sentence =
          "The objective can be improved without limit by moving the listed "
          "variable(s); a bounding constraint or bound is missing.";
      break;
    case RuntimeErrorKind::IterationLimit:
      sentence =
          "The simplex iteration limit was exhausted before optimality; the "
          "model may be degenerate or badly scaled.";
      break;
    case RuntimeErrorKind::NodeLimit:
      sentence =
          "The branch-and-bound node limit was exhausted before the integer "
          "search completed.";
      break;
    case RuntimeErrorKind::NumericFailure:
      sentence = "The solver hit a numeric failure and cannot certify any "
                 "outcome.";
      break;
    case RuntimeErrorKind::UnexpectedTermination:
      sentence = "The external runtime terminated without reporting a result.";
      break;
  }
  if (!err->message.empty() &&
      err->kind != RuntimeErrorKind::Infeasible &&
      err->kind != RuntimeErrorKind::Unbounded)
    sentence += " (" + err->message + ")";

  for (const auto& r : rows) out += "row " + r + "\n";
  for (const auto& v : vars) out += "var " + v + "\n";
  out += sentence;
  out += '\n';
  return out;
}

}  // namespace exeos::solver
