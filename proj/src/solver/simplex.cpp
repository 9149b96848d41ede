#include <algorithm>
#include <cmath>
#include <limits>

#include "exeos/solver/solve.hpp"

namespace exeos::solver {

std::string_view to_string(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::Infeasible: return "infeasible";
    case RuntimeErrorKind::Unbounded: return "unbounded";
    case RuntimeErrorKind::IterationLimit: return "iteration-limit";
    case RuntimeErrorKind::NodeLimit: return "node-limit";
    case RuntimeErrorKind::NumericFailure: return "numeric-failure";
    case RuntimeErrorKind::UnexpectedTermination: return "unexpected-termination";
  }
  return "numeric-failure";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Original variables are rewritten onto nonnegative simplex columns:
//   Shift   x = offset + x'          (finite lower bound)
//   Negate  x = offset - x'          (upper bound only)
//   Split   x = x'(pos) - x''(neg)   (free)
// A finite upper bound on a Shift column adds the row  x' <= u - l.
struct Transform {
  enum Kind { Shift, Negate, Split } kind = Shift;
  double offset = 0.0;
  int col = -1;
  int col2 = -1;  // Split only
};

struct Tableau {
  // rows[i] has ncols coefficient entries followed by the rhs.
  std::vector<std::vector<double>> rows;
  std::vector<int> basis;       // basic column per row
  int ncols = 0;

  double& at(int r, int c) { return rows[r][c]; }
  double rhs(int r) const { return rows[r][ncols]; }

  void pivot(int r, int c) {
    std::vector<double>& prow = rows[r];
    double inv = 1.0 / prow[c];
    for (double& v : prow) v *= inv;
    prow[c] = 1.0;  // exact
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      double factor = rows[i][c];
      if (factor == 0.0) continue;
      for (int j = 0; j <= ncols; ++j) rows[i][j] -= factor * prow[j];
      rows[i][c] = 0.0;  // exact
    }
    basis[r] = c;
  }
};

struct SimplexProblem {
  // Column layout: structural (per transform) then slack/surplus then
  // artificial. Deterministic layout fixes Bland tie-breaking.
  std::vector<Transform> transforms;   // per original variable
  std::vector<std::string> col_owner;  // original var name per structural col
  std::vector<int> col_sign;           // +1 / -1 movement of owner per unit
  Tableau t;
  int n_struct = 0;
  int first_artificial = 0;
  std::vector<double> phase2_cost;  // maximize; length = ncols pre-artificial
};

// Status of a low-level simplex run.
enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpRun {
  LpStatus status = LpStatus::Optimal;
  int unbounded_col = -1;
  std::uint64_t iterations = 0;
};

// Maximizes cost over the tableau with Bland's rule: entering column is the
// lowest-index column with reduced cost > pivot_tol; leaving row is the
// minimum ratio, ties broken by lowest basic column index.
LpRun run_simplex(Tableau& t, const std::vector<double>& cost,
                  const SolverParams& params, std::uint64_t max_iters,
                  int usable_cols) {
  LpRun run;
  const int m = static_cast<int>(t.rows.size());
  for (;;) {
    if (run.iterations >= max_iters) {
      run.status = LpStatus::IterationLimit;
      return run;
    }
    int entering = -1;
    for (int j = 0; j < usable_cols; ++j) {
      double rc = j < static_cast<int>(cost.size()) ? cost[j] : 0.0;
      for (int i = 0; i < m; ++i) {
        int b = t.basis[i];
        double cb = b < static_cast<int>(cost.size()) ? cost[b] : 0.0;
        if (cb != 0.0) rc -= cb * t.rows[i][j];
      }
      if (rc > params.pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return run;  // optimal

    int leave = -1;
    double best_ratio = kInf;
    for (int i = 0; i < m; ++i) {
      double a = t.rows[i][entering];
      if (a > params.pivot_tol) {
        double ratio = t.rhs(i) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave < 0 || t.basis[i] < t.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      run.status = LpStatus::Unbounded;
      run.unbounded_col = entering;
      return run;
    }
    t.pivot(leave, entering);
    ++run.iterations;
  }
}

struct BuildError {
  RuntimeError error;
};

SimplexProblem build(const ProblemInstance& inst) {
  SimplexProblem sp;
  // Bound sanity: crossed bounds are an immediate infeasibility whose
  // "rows" are the variables themselves.
  {
    std::vector<std::string> crossed;
    for (const auto& v : inst.variables)
      if (v.lower && v.upper && *v.lower > *v.upper) crossed.push_back(v.name);
    if (!crossed.empty()) {
      RuntimeError e;
      e.kind = RuntimeErrorKind::Infeasible;
      e.vars = crossed;
      e.message = "variable bounds cross";
      throw BuildError{std::move(e)};
    }
  }

  struct PendingRow {
    std::vector<std::pair<int, double>> coeffs;  // column -> coefficient
    ampl::Relation rel;
    double rhs;
  };
  std::vector<PendingRow> pending;

  int next_col = 0;
  auto new_col = [&](const std::string& owner, int sign) {
    sp.col_owner.push_back(owner);
    sp.col_sign.push_back(sign);
    return next_col++;
  };

  sp.transforms.resize(inst.variables.size());
  for (const auto& v : inst.variables) {
    Transform& tr = sp.transforms[v.id];
    double lo = v.lower.value_or(-kInf);
    double hi = v.upper.value_or(kInf);
    if (lo > -kInf) {
      tr.kind = Transform::Shift;
      tr.offset = lo;
      tr.col = new_col(v.name, +1);
      if (hi < kInf && hi > lo)
        pending.push_back({{{tr.col, 1.0}}, ampl::Relation::Le, hi - lo});
      // hi == lo: the column is fixed at zero by  x' <= 0.
      if (hi < kInf && hi == lo)
        pending.push_back({{{tr.col, 1.0}}, ampl::Relation::Le, 0.0});
    } else if (hi < kInf) {
      tr.kind = Transform::Negate;
      tr.offset = hi;
      tr.col = new_col(v.name, -1);
    } else {
      tr.kind = Transform::Split;
      tr.col = new_col(v.name, +1);
      tr.col2 = new_col(v.name, -1);
    }
  }
  sp.n_struct = next_col;

  for (const auto& row : inst.rows) {
    PendingRow pr;
    pr.rel = row.relation;
    pr.rhs = row.rhs;
    std::map<int, double> cols;
    for (const auto& [var, coeff] : row.coeffs) {
      const Transform& tr = sp.transforms[var];
      switch (tr.kind) {
        case Transform::Shift:
          pr.rhs -= coeff * tr.offset;
          cols[tr.col] += coeff;
          break;
        case Transform::Negate:
          pr.rhs -= coeff * tr.offset;
          cols[tr.col] -= coeff;
          break;
        case Transform::Split:
          cols[tr.col] += coeff;
          cols[tr.col2] -= coeff;
          break;
      }
    }
    for (const auto& [c, val] : cols) pr.coeffs.emplace_back(c, val);
    pending.push_back(std::move(pr));
  }

  // Objective in transformed space (maximize canonical form).
  double sense = inst.objective.sense == ampl::ObjectiveSense::Maximize
                     ? 1.0
                     : -1.0;
  sp.phase2_cost.assign(sp.n_struct, 0.0);
  for (std::size_t v = 0; v < inst.variables.size(); ++v) {
    double c = v < inst.objective.coeffs.size() ? inst.objective.coeffs[v] : 0.0;
    if (c == 0.0) continue;
    const Transform& tr = sp.transforms[v];
    switch (tr.kind) {
      case Transform::Shift:
        sp.phase2_cost[tr.col] += sense * c;
        break;
      case Transform::Negate:
        sp.phase2_cost[tr.col] -= sense * c;
        break;
      case Transform::Split:
        sp.phase2_cost[tr.col] += sense * c;
        sp.phase2_cost[tr.col2] -= sense * c;
        break;
    }
  }

  // Slack / surplus / artificial columns; RHS normalized nonnegative.
  const int m = static_cast<int>(pending.size());
  std::vector<int> slack_col(m, -1);
  std::vector<bool> needs_artificial(m, false);
  for (int i = 0; i < m; ++i) {
    PendingRow& pr = pending[i];
    if (pr.rhs < 0.0) {
      pr.rhs = -pr.rhs;
      for (auto& [c, val] : pr.coeffs) val = -val;
      if (pr.rel == ampl::Relation::Le)
        pr.rel = ampl::Relation::Ge;
      else if (pr.rel == ampl::Relation::Ge)
        pr.rel = ampl::Relation::Le;
    }
    switch (pr.rel) {
      case ampl::Relation::Le:
        slack_col[i] = new_col("", 0);
        break;
      case ampl::Relation::Ge:
        slack_col[i] = new_col("", 0);  // surplus, coefficient -1
        needs_artificial[i] = true;
        break;
      case ampl::Relation::Eq:
        needs_artificial[i] = true;
        break;
    }
  }
  sp.first_artificial = next_col;
  std::vector<int> artificial_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (needs_artificial[i]) artificial_col[i] = new_col("", 0);

  sp.t.ncols = next_col;
  sp.t.rows.assign(m, std::vector<double>(next_col + 1, 0.0));
  sp.t.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    const PendingRow& pr = pending[i];
    for (const auto& [c, val] : pr.coeffs) sp.t.rows[i][c] = val;
    sp.t.rows[i][next_col] = pr.rhs;
    if (pr.rel == ampl::Relation::Le) {
      sp.t.rows[i][slack_col[i]] = 1.0;
      sp.t.basis[i] = slack_col[i];
    } else {
      if (pr.rel == ampl::Relation::Ge) sp.t.rows[i][slack_col[i]] = -1.0;
      sp.t.rows[i][artificial_col[i]] = 1.0;
      sp.t.basis[i] = artificial_col[i];
    }
  }
  return sp;
}

}  // namespace

SolveOutcome solve_lp(const ProblemInstance& inst, const SolverParams& params) {
  SimplexProblem sp;
  try {
    sp = build(inst);
  } catch (BuildError& be) {
    return std::move(be.error);
  }
  Tableau& t = sp.t;
  const int m = static_cast<int>(t.rows.size());
  std::uint64_t iterations = 0;

  // Phase 1: maximize -(sum of artificials) up to 0.
  bool any_artificial = sp.first_artificial < t.ncols;
  if (any_artificial) {
    std::vector<double> cost(t.ncols, 0.0);
    for (int j = sp.first_artificial; j < t.ncols; ++j) cost[j] = -1.0;
    LpRun run = run_simplex(t, cost, params, params.max_simplex_iterations,
                            t.ncols);
    iterations += run.iterations;
    if (run.status == LpStatus::IterationLimit)
      return RuntimeError{RuntimeErrorKind::IterationLimit,
                          "simplex iteration limit reached in phase 1"};
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= sp.first_artificial) art_sum += t.rhs(i);
    if (art_sum > params.feasibility_tol)
      return RuntimeError{RuntimeErrorKind::Infeasible,
                          "phase-1 optimum leaves artificial value " +
                              format_double(art_sum)};
    // Drive remaining artificials out of the basis where possible; rows that
    // cannot pivot are redundant and are dropped.
    for (int i = m - 1; i >= 0; --i) {
      if (t.basis[i] < sp.first_artificial) continue;
      int pivot_col = -1;
      for (int j = 0; j < sp.first_artificial; ++j) {
        if (std::abs(t.rows[i][j]) > params.pivot_tol) {
          pivot_col = j;
          break;
        }
      }
      if (pivot_col >= 0) {
        t.pivot(i, pivot_col);
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }

  // Phase 2 never lets artificial columns re-enter.
  LpRun run = run_simplex(t, sp.phase2_cost, params,
                          params.max_simplex_iterations - iterations,
                          sp.first_artificial);
  iterations += run.iterations;
  if (run.status == LpStatus::IterationLimit)
    return RuntimeError{RuntimeErrorKind::IterationLimit,
                        "simplex iteration limit reached"};
  if (run.status == LpStatus::Unbounded) {
    // Vars moving along the improving ray.
    RuntimeError e;
    e.kind = RuntimeErrorKind::Unbounded;
    std::map<std::string, double> movement;
    auto add_move = [&](int col, double delta) {
      if (col < sp.n_struct && !sp.col_owner[col].empty())
        movement[sp.col_owner[col]] += sp.col_sign[col] * delta;
    };
    add_move(run.unbounded_col, 1.0);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      add_move(t.basis[i], -t.rows[i][run.unbounded_col]);
    for (const auto& [name, delta] : movement)
      if (std::abs(delta) > params.feasibility_tol) e.vars.push_back(name);
    e.message = "objective improves without bound";
    return e;
  }

  // Extract transformed values, then map back to original variables.
  std::vector<double> colval(t.ncols, 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    colval[t.basis[i]] = t.rhs(i);
  Solved s;
  s.iterations = iterations;
  double objective = inst.objective.constant;
  for (const auto& v : inst.variables) {
    const Transform& tr = sp.transforms[v.id];
    double x = 0.0;
    switch (tr.kind) {
      case Transform::Shift: x = tr.offset + colval[tr.col]; break;
      case Transform::Negate: x = tr.offset - colval[tr.col]; break;
      case Transform::Split: x = colval[tr.col] - colval[tr.col2]; break;
    }
    // Snap values that drifted inside tolerance back onto their bounds.
    if (v.lower && std::abs(x - *v.lower) < params.feasibility_tol)
      x = *v.lower;
    if (v.upper && std::abs(x - *v.upper) < params.feasibility_tol)
      x = *v.upper;
    if (x == 0.0) x = 0.0;  // normalize -0
    s.assignment[v.name] = x;
    if (v.id < inst.objective.coeffs.size())
      objective += inst.objective.coeffs[v.id] * x;
  }
  s.objective = objective;
  return s;
}

}  // namespace exeos::solver
