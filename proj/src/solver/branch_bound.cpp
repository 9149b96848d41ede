#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "exeos/solver/solve.hpp"

namespace exeos::solver {

namespace {

bool is_int_var(const InstanceVar& v) {
  return v.integrality != ampl::Integrality::Continuous;
}

struct Node {
  // Bound overrides keyed by variable id.
  std::map<std::uint32_t, double> lower;
  std::map<std::uint32_t, double> upper;
  double bound = 0.0;  // relaxation objective, in maximize convention
  std::uint64_t depth = 0;
  std::uint64_t id = 0;
};

// Best bound first; depth-first on bound ties; creation order last.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

ProblemInstance relax(const ProblemInstance& inst, const Node& node) {
  ProblemInstance r = inst;
  for (auto& v : r.variables) {
    v.integrality = ampl::Integrality::Continuous;
    if (auto it = node.lower.find(v.id); it != node.lower.end())
      v.lower = std::max(v.lower.value_or(it->second), it->second);
    if (auto it = node.upper.find(v.id); it != node.upper.end())
      v.upper = std::min(v.upper.value_or(it->second), it->second);
  }
  return r;
}

double evaluate(const ProblemInstance& inst,
                const std::map<std::string, double>& assignment) {
  double obj = inst.objective.constant;
  for (const auto& v : inst.variables)
    if (v.id < inst.objective.coeffs.size())
      obj += inst.objective.coeffs[v.id] * assignment.at(v.name);
  return obj;
}

}  // namespace

SolveOutcome solve_milp(const ProblemInstance& inst,
                        const SolverParams& params) {
  if (!inst.has_integer_vars()) return solve_lp(inst, params);

  const double sense =
      inst.objective.sense == ampl::ObjectiveSense::Maximize ? 1.0 : -1.0;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::uint64_t next_id = 0;
  std::uint64_t nodes = 0;
  std::uint64_t iterations = 0;
  bool have_incumbent = false;
  Solved incumbent;
  double incumbent_score = -std::numeric_limits<double>::infinity();

  Node root;
  root.id = next_id++;
  root.bound = std::numeric_limits<double>::infinity();
  open.push(root);

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound <= incumbent_score + 1e-9) continue;
    if (nodes >= params.max_bb_nodes) {
      RuntimeError e;
      e.kind = RuntimeErrorKind::NodeLimit;
      e.message = "branch-and-bound node limit reached after " +
                  std::to_string(nodes) + " nodes";
      return e;
    }
    ++nodes;

    SolveOutcome rel = solve_lp(relax(inst, node), params);
    if (const RuntimeError* err = std::get_if<RuntimeError>(&rel)) {
      if (err->kind == RuntimeErrorKind::Infeasible) continue;  // prune
      if (err->kind == RuntimeErrorKind::Unbounded && node.depth == 0) {
        // Unbounded relaxation at the root: report unbounded for the MILP.
        return rel;
      }
      if (err->kind == RuntimeErrorKind::Unbounded) continue;
      return rel;  // iteration limit / numeric failure propagate
    }
    const Solved& lp = std::get<Solved>(rel);
    iterations += lp.iterations;
    double lp_score = sense * lp.objective;
    if (have_incumbent && lp_score <= incumbent_score + 1e-9) continue;

    // Most-fractional integer variable; ties take the lowest id.
    const InstanceVar* branch_var = nullptr;
    double branch_val = 0.0;
    double best_frac_dist = -1.0;
    for (const auto& v : inst.variables) {
      if (!is_int_var(v)) continue;
      double x = lp.assignment.at(v.name);
      double frac = x - std::floor(x);
      double dist = std::min(frac, 1.0 - frac);
      if (dist <= params.integrality_tol) continue;
      double score = 0.5 - std::abs(frac - 0.5);
      if (score > best_frac_dist + 1e-12) {
        best_frac_dist = score;
        branch_var = &v;
        branch_val = x;
      }
    }

    if (!branch_var) {
      // Integral: round the integer coordinates and evaluate exactly.
      Solved candidate = lp;
      for (const auto& v : inst.variables)
        if (is_int_var(v))
          candidate.assignment[v.name] = std::round(lp.assignment.at(v.name));
      candidate.objective = evaluate(inst, candidate.assignment);
      double score = sense * candidate.objective;
      if (!have_incumbent || score > incumbent_score) {
        have_incumbent = true;
        incumbent = std::move(candidate);
        incumbent_score = score;
      }
      continue;
    }

    Node down = node;
    down.id = next_id++;
    down.depth = node.depth + 1;
    down.bound = lp_score;
    double floor_v = std::floor(branch_val);
    auto it = down.upper.find(branch_var->id);
    down.upper[branch_var->id] =
        it == down.upper.end() ? floor_v : std::min(it->second, floor_v);
    Node up = node;
    up.id = next_id++;
    up.depth = node.depth + 1;
    up.bound = lp_score;
    double ceil_v = std::ceil(branch_val);
    auto it2 = up.lower.find(branch_var->id);
    up.lower[branch_var->id] =
        it2 == up.lower.end() ? ceil_v : std::max(it2->second, ceil_v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (!have_incumbent)
    return RuntimeError{RuntimeErrorKind::Infeasible,
                        "no integer-feasible point exists"};
  incumbent.node_count = nodes;
  incumbent.iterations = iterations;
  return incumbent;
}

}  // namespace exeos::solver
