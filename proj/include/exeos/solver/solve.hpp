#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "exeos/instance.hpp"

namespace exeos::solver {

struct SolverParams {
  double feasibility_tol = 1e-6;
  double pivot_tol = 1e-9;
  double integrality_tol = 1e-6;
  std::uint64_t max_simplex_iterations = 100000;
  std::uint64_t max_bb_nodes = 100000;
};

struct Solved {
  double objective = 0.0;
  std::map<std::string, double> assignment;
  std::uint64_t node_count = 0;
  std::uint64_t iterations = 0;
};

enum class RuntimeErrorKind {
  Infeasible,
  Unbounded,
  IterationLimit,
  NodeLimit,
  NumericFailure,
  UnexpectedTermination,  // external runtimes only; never produced here
};

std::string_view to_string(RuntimeErrorKind kind);

struct RuntimeError {
  RuntimeErrorKind kind = RuntimeErrorKind::NumericFailure;
  std::string message;
  // Hints for diagnostics: instance-level names implicated in the failure.
  std::vector<std::string> rows;
  std::vector<std::string> vars;
};

using SolveOutcome = std::variant<Solved, RuntimeError>;

inline bool solved(const SolveOutcome& o) {
  return std::holds_alternative<Solved>(o);
}

// Two-phase dense-tableau simplex with Bland's rule. Integrality attributes
// are ignored (callers strip or dispatch).
SolveOutcome solve_lp(const ProblemInstance& instance,
                      const SolverParams& params = {});

// Branch-and-bound over solve_lp relaxations: best-bound node selection,
// most-fractional branching. Continuous instances degenerate to solve_lp.
SolveOutcome solve_milp(const ProblemInstance& instance,
                        const SolverParams& params = {});

// Feedback block for refinement prompts. First line `ERROR <kind>`, then
// `row <name>` / `var <name>` lines, then one explanatory sentence. For
// infeasibility the rows are a greedy (best-effort, not minimal) subset whose
// removal restores feasibility.
std::string render_diagnostics(const SolveOutcome& outcome,
                               const ProblemInstance& instance,
                               const SolverParams& params = {});

}  // namespace exeos::solver
