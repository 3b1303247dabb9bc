#pragma once

// Solver-agnostic linear / mixed-integer program representation.
//
// Programs are built incrementally (variables, then constraints) and solved
// through a backend (see backend.hpp). The reference backend is a dense
// two-phase bounded-variable simplex plus branch-and-bound. All programs
// minimize by default; call set_maximize() to flip the sense -- results are
// reported in the original orientation, including duals.

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccuc::milp {

class SolverBackend;  // backend.hpp

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, TimeLimit };

std::string to_string(SolveStatus s);

/// Error raised when the solver itself fails (iteration cap, numerical
/// breakdown, post-solve verification failure). Never silent.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VariableRef {
  int id = -1;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
  std::string name;
  // crash hint: start this variable at its upper bound when nonbasic
  bool prefer_upper_start = false;
};

struct Term {
  int var = -1;
  double coeff = 0.0;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;  // no duplicate vars, finite coefficients
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct SolverOptions {
  double rel_gap = 1e-3;          // MILP relative optimality gap
  double time_limit = 1e30;       // seconds
  double feasibility_tol = 1e-7;  // reused by all feasibility checks
  double integrality_tol = 1e-6;
  bool bland_pricing = false;     // price with Bland's rule from pivot one

  void validate() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd primal;  // per variable
  Eigen::VectorXd duals;   // per constraint (LPs only; empty for MILPs)
  double bound = 0.0;      // best dual bound (MILP)
  double gap = 0.0;        // relative optimality gap at exit
  long nodes = 0;          // branch-and-bound nodes processed

  bool has_incumbent() const {
    return status == SolveStatus::Optimal || status == SolveStatus::GapLimit ||
           (status == SolveStatus::TimeLimit && primal.size() > 0);
  }
};

class LinearProgram {
 public:
  int add_variable(const std::string& name, double lower, double upper,
                   VarKind kind = VarKind::Continuous);

  /// Marks a variable to start at its upper bound in the simplex crash.
  void set_start_hint_upper(int var) { vars_.at(var).prefer_upper_start = true; }

  /// Adds `coeff` to the objective coefficient of `var` (minimization).
  void add_objective(int var, double coeff);

  int add_constraint(const std::string& name, std::vector<Term> terms,
                     Sense sense, double rhs);

  void set_maximize(bool maximize) { maximize_ = maximize; }
  bool maximize() const { return maximize_; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  const VariableRef& variable(int id) const { return vars_.at(id); }
  const LinearConstraint& constraint(int row) const { return cons_.at(row); }
  const std::vector<VariableRef>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return cons_; }
  double objective_coeff(int var) const { return obj_.at(var); }
  const std::vector<double>& objective() const { return obj_; }

  bool has_binaries() const { return num_binaries_ > 0; }
  int num_binaries() const { return num_binaries_; }

  /// Objective value of a primal point, in the program's orientation.
  double eval_objective(const Eigen::VectorXd& x) const;

  /// Signed violations of one constraint at x (positive = violated).
  double constraint_violation(int row, const Eigen::VectorXd& x) const;
  double max_violation(const Eigen::VectorXd& x) const;

  /// Debug dump in LP text format (objective, constraints, bounds sections).
  std::string dump() const;

 private:
  std::vector<VariableRef> vars_;
  std::vector<LinearConstraint> cons_;
  std::vector<double> obj_;
  int num_binaries_ = 0;
  bool maximize_ = false;
};

// A MILP is a LinearProgram with at least one binary variable; the
// distinction is carried by the variable kinds, not the container.
using MilpProgram = LinearProgram;

}  // namespace ccuc::milp
