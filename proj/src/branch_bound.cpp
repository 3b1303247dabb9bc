#include "ccuc/branch_bound.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "ccuc/simplex.hpp"

namespace ccuc::milp {

namespace {

struct Node {
  long id = 0;
  double parent_bound = -kInf;
  std::vector<double> lower, upper;
};

struct NodeOrder {
  // best-bound first (minimization); ties resolved by creation order
  bool operator()(const std::shared_ptr<Node>& a,
                  const std::shared_ptr<Node>& b) const {
    if (a->parent_bound != b->parent_bound) {
      return a->parent_bound > b->parent_bound;
    }
    return a->id > b->id;
  }
};

int most_fractional_binary(const LinearProgram& p, const Eigen::VectorXd& x,
                           double tol) {
  int pick = -1;
  double best = tol;
  for (int j = 0; j < p.num_variables(); ++j) {
    if (p.variable(j).kind != VarKind::Binary) continue;
    double frac = std::abs(x[j] - std::round(x[j]));
    if (frac > best + 1e-12) {
      best = frac;
      pick = j;
    }
  }
  return pick;
}

}  // namespace

SolveResult solve_milp(const MilpProgram& program,
                       const SolverOptions& options) {
  options.validate();
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  // Work on the minimization form; flip on exit if maximizing.
  const bool maximize = program.maximize();
  const double sign = maximize ? -1.0 : 1.0;

  const int n = program.num_variables();
  std::vector<double> lo0(n), hi0(n);
  for (int j = 0; j < n; ++j) {
    lo0[j] = program.variable(j).lower;
    hi0[j] = program.variable(j).upper;
  }

  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>,
                      NodeOrder>
      open;
  auto root = std::make_shared<Node>();
  root->lower = lo0;
  root->upper = hi0;
  open.push(root);

  long next_id = 1;
  long processed = 0;
  bool root_solved = false;
  double incumbent_obj = kInf;  // minimization orientation
  Eigen::VectorXd incumbent;
  double best_bound = -kInf;
  bool timed_out = false;

  auto rel_gap = [&](double inc, double bnd) {
    if (!std::isfinite(inc)) return kInf;
    return (inc - bnd) / std::max(1.0, std::abs(inc));
  };

  while (!open.empty()) {
    // global bound = min over open nodes (root pass pending -> unknown)
    best_bound = open.top()->parent_bound;
    if (root_solved &&
        rel_gap(incumbent_obj, best_bound) <= options.rel_gap) {
      break;
    }
    if (elapsed() > options.time_limit) {
      timed_out = true;
      break;
    }
    auto node = open.top();
    open.pop();
    ++processed;
    if (root_solved && node->parent_bound >=
                           incumbent_obj - options.feasibility_tol) {
      continue;  // dominated
    }

    SolveResult relax =
        solve_lp_relaxation(program, options, node->lower, node->upper);
    if (relax.status == SolveStatus::Infeasible) {
      if (node->id == 0) {
        SolveResult r;
        r.status = SolveStatus::Infeasible;
        return r;
      }
      continue;
    }
    if (relax.status == SolveStatus::Unbounded) {
      SolveResult r;
      r.status = SolveStatus::Unbounded;
      return r;
    }
    double node_obj = sign * relax.objective;  // minimization orientation
    if (node->id == 0) root_solved = true;
    if (node_obj >= incumbent_obj - options.feasibility_tol) {
      continue;  // cannot improve
    }

    int branch_var =
        most_fractional_binary(program, relax.primal, options.integrality_tol);
    if (branch_var < 0) {
      // integral solution
      incumbent_obj = node_obj;
      incumbent = relax.primal;
      for (int j = 0; j < n; ++j) {
        if (program.variable(j).kind == VarKind::Binary) {
          incumbent[j] = std::round(incumbent[j]);
        }
      }
      continue;
    }
    for (int side = 0; side < 2; ++side) {
      auto child = std::make_shared<Node>();
      child->id = next_id++;
      child->parent_bound = node_obj;
      child->lower = node->lower;
      child->upper = node->upper;
      if (side == 0) {
        child->upper[branch_var] = 0.0;
      } else {
        child->lower[branch_var] = 1.0;
      }
      open.push(child);
    }
  }

  SolveResult res;
  res.nodes = processed;
  if (!std::isfinite(incumbent_obj)) {
    if (timed_out) {
      res.status = SolveStatus::TimeLimit;
      res.gap = kInf;
      return res;
    }
    res.status = SolveStatus::Infeasible;
    return res;
  }
  double final_bound = open.empty() ? incumbent_obj
                                    : std::min(incumbent_obj, best_bound);
  double gap = rel_gap(incumbent_obj, final_bound);
  res.primal = incumbent;
  res.objective = program.eval_objective(incumbent);
  res.bound = sign * final_bound;
  res.gap = std::max(0.0, gap);
  if (timed_out) {
    res.status = SolveStatus::TimeLimit;
  } else if (open.empty() || gap <= 1e-12) {
    res.status = SolveStatus::Optimal;
  } else {
    res.status = SolveStatus::GapLimit;
  }
  return res;
}

}  // namespace ccuc::milp
