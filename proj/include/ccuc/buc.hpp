#pragma once

// Baseline unit commitment master problem: commitment constraints with
// minimum up/down times and initial conditions, the embedded DC economic
// dispatch, linear costs, and the growing pool of Benders feasibility cuts.

#include <Eigen/Core>
#include <set>
#include <string>
#include <vector>

#include "ccuc/contingency.hpp"
#include "ccuc/milp.hpp"
#include "ccuc/model.hpp"

namespace ccuc::buc {

/// Raised when a solver incumbent fails independent re-verification;
/// signals a solver or model bug rather than bad input.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CommitmentSolution {
  Eigen::MatrixXi x;              // generator x period
  Eigen::MatrixXd startup_cost;   // generator x period
  Eigen::MatrixXd shutdown_cost;  // generator x period
  Eigen::MatrixXd dispatch;       // generator x period (p~)
  Eigen::MatrixXd flows;          // line x period (f~)
  Eigen::MatrixXd angles;         // bus x period (theta~)
  double objective = 0.0;

  int periods() const { return static_cast<int>(x.cols()); }
  std::set<int> committed_units(int t) const;
  std::set<int> committed_units_any_period() const;
  double energy_cost(const Instance& instance) const;
  double startup_total() const { return startup_cost.sum(); }
  double shutdown_total() const { return shutdown_cost.sum(); }
};

/// Variable indices of the master MILP; order is fixed so that reruns are
/// bit-comparable.
struct MasterLayout {
  int G = 0, E = 0, I = 0, T = 0;
  int x0 = 0, cu0 = 0, cd0 = 0, p0 = 0, f0 = 0, theta0 = 0;
  int first_cut_row = 0;

  int x(int g, int t) const { return x0 + g * T + t; }
  int cu(int g, int t) const { return cu0 + g * T + t; }
  int cd(int g, int t) const { return cd0 + g * T + t; }
  int p(int g, int t) const { return p0 + g * T + t; }
  int f(int e, int t) const { return f0 + e * T + t; }
  int theta(int i, int t) const { return theta0 + i * T + t; }
};

class CutPool {
 public:
  /// Deduplicates on (contingency, period, coefficient hash). Returns false
  /// if an identical cut is already pooled.
  bool add(contingency::FeasibilityCut cut);
  const std::vector<contingency::FeasibilityCut>& cuts() const {
    return cuts_;
  }
  int size() const { return static_cast<int>(cuts_.size()); }

 private:
  std::vector<contingency::FeasibilityCut> cuts_;
  std::set<std::string> keys_;
};

struct MasterProblem {
  milp::MilpProgram program;
  MasterLayout layout;
};

/// Builds the master MILP: startup/shutdown + energy objective, commitment
/// constraints, DC dispatch, reference-angle fixing, and one row per pooled
/// cut over the (x, p~) variables of the cut's period.
MasterProblem build_master(const Instance& instance, const CutPool& pool);

struct ConstraintViolation {
  std::string family;
  int generator = -1;
  int bus = -1;
  int line = -1;
  int period = -1;
  double amount = 0.0;
  std::string detail;
};

struct CommitmentReport {
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Pure check of the commitment constraint families (initial conditions,
/// minimum up/down) for a full binary matrix.
CommitmentReport verify_commitment_constraints(const Eigen::MatrixXi& x,
                                               const Instance& instance);

/// Physics re-check of a full solution (balance, flow definition, limits,
/// ramps, reference angle, cost identities) independent of the solver.
CommitmentReport verify_solution(const CommitmentSolution& solution,
                                 const Instance& instance,
                                 const milp::SolverOptions& options);

/// Rounds, extracts and re-verifies a solver incumbent. Throws
/// InternalConsistencyError if any invariant fails beyond tolerance.
CommitmentSolution extract_solution(const milp::SolveResult& result,
                                    const Instance& instance,
                                    const MasterLayout& layout,
                                    const milp::SolverOptions& options);

/// Solution export/import (JSON): per-period commitment, dispatch, flows,
/// angles and the objective decomposition.
std::string solution_to_json(const CommitmentSolution& solution,
                             const Instance& instance);
CommitmentSolution solution_from_json(const std::string& text,
                                      const Instance& instance);

}  // namespace ccuc::buc
