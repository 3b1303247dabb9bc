#pragma once

// Contingency enumeration, the per-(contingency, period) feasibility LP,
// and Benders feasibility-cut extraction from its duals.
//
// The feasibility check solves the always-feasible relaxed problem
//   min sum_g r_g + s
// over the post-contingency recourse (p, f, theta, q) plus generation
// shedding r and above-threshold load shedding s, with the failure vector
// held constant. Its optimal value is 0 exactly when a corrective recourse
// exists; its duals form a bounded ray of the dual cone and yield the cut
// coefficients directly.

#include <Eigen/Core>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccuc/milp.hpp"
#include "ccuc/model.hpp"

namespace ccuc::contingency {

struct Contingency {
  std::vector<int> failed_gens;   // sorted generator ids with d_g = 1
  std::vector<int> failed_lines;  // sorted line ids with d_e = 1

  int size() const {
    return static_cast<int>(failed_gens.size() + failed_lines.size());
  }
  bool involves_gen(int g) const;
  bool involves_line(int e) const;

  /// Canonical key (gens as-is, lines offset by G) for set semantics.
  std::vector<int> key(int num_generators) const;
  std::string describe(const Instance& instance) const;
};

bool operator==(const Contingency& a, const Contingency& b);

/// Sum_{j=1..k} C(g_eff + e_eff, j). Throws on overflow past 2^62.
long long count_contingencies(int g_eff, int e_eff, int k);
long long count_exact_size(int g_eff, int e_eff, int j);

/// Lazily yields every subset of non-immune elements of exactly size j,
/// each once, in lexicographic order (generators by id, then lines by id).
class ContingencyEnumerator {
 public:
  ContingencyEnumerator(const Instance& instance, int j);
  std::optional<Contingency> next();
  long long total() const { return total_; }

 private:
  std::vector<int> elements_;  // gens as g, lines as G + e
  int num_generators_ = 0;
  int j_ = 0;
  long long total_ = 0;
  std::vector<int> odometer_;
  bool done_ = false;
};

std::vector<Contingency> enumerate_contingencies(const Instance& instance,
                                                 int j);

class DynamicContingencyList {
 public:
  /// Returns false (and leaves the list unchanged) on duplicates.
  bool add(const Contingency& c, int num_generators);
  bool contains(const Contingency& c, int num_generators) const;
  const std::vector<Contingency>& items() const { return items_; }
  int size() const { return static_cast<int>(items_.size()); }

 private:
  std::vector<Contingency> items_;
  std::set<std::vector<int>> keys_;
};

/// Duals of the relaxed contingency-feasibility LP, named after the rows
/// they price: alpha (bus balance), beta (flow definition), delta_hat /
/// delta_check (flow caps), gamma (committed capacity), lambda_hat /
/// lambda_check (ramp up/down), zeta (per-bus shed cap), eta (r <= p),
/// pi (aggregate shed cap).
struct CfDuals {
  Eigen::VectorXd alpha, zeta;                 // per bus
  Eigen::VectorXd beta, delta_hat, delta_check;  // per line
  Eigen::VectorXd gamma, lambda_hat, lambda_check, eta;  // per generator
  double pi = 0.0;
};

struct CfCheck {
  bool feasible = false;
  double violation = 0.0;  // MW of unavoidable shedding above threshold
  CfDuals duals;
};

struct RelaxedCf {
  milp::LinearProgram lp;
  // variable offsets
  int p0 = 0, f0 = 0, theta0 = 0, q0 = 0, r0 = 0, s0 = 0;
  // row offsets in lp, in construction order
  int row_balance = 0, row_flow = 0, row_f_ub = 0, row_f_lb = 0;
  int row_p_ub = 0, row_ramp_up = 0, row_ramp_down = 0;
  int row_q_ub = 0, row_r_le_p = 0, row_aggregate = 0;
};

/// Builds the relaxed CF LP for commitment x_t, dispatch p_t and the given
/// failure set at period t. Accepts the empty contingency (size 0).
RelaxedCf build_relaxed_cf(const Instance& instance,
                           const Eigen::VectorXi& x_t,
                           const Eigen::VectorXd& p_t, const Contingency& c,
                           int t);

CfCheck check_feasibility(const Instance& instance, const Eigen::VectorXi& x_t,
                          const Eigen::VectorXd& p_t, const Contingency& c,
                          int t, const milp::SolverOptions& options,
                          const milp::SolverBackend* backend = nullptr);

/// One Benders feasibility cut bound to a (contingency, period) pair,
/// realized as  constant + coef_x . x^t + coef_p . p^t <= 0  over the
/// master variables of the matching period.
struct FeasibilityCut {
  Contingency contingency;
  int period = 0;
  CfDuals duals;
  Eigen::VectorXd coef_x, coef_p;  // per generator
  double constant = 0.0;
  double violation_at_creation = 0.0;
  int iteration = 0;  // set by the engine when pooled

  double evaluate(const Eigen::VectorXi& x_t, const Eigen::VectorXd& p_t) const;
  double evaluate(const Eigen::VectorXd& x_t, const Eigen::VectorXd& p_t) const;
};

/// Assembles the cut from an infeasible check. Throws std::invalid_argument
/// if the check was feasible and milp::SolveError if the duals violate
/// their sign conditions.
FeasibilityCut make_cut(const CfCheck& check, const Instance& instance,
                        const Contingency& c, int t);

struct ScreenViolation {
  Contingency contingency;
  int period = 0;
  double violation = 0.0;  // MW
  double threshold = 0.0;  // epsilon_{|c|} * D^t
  CfCheck check;
};

/// Runs check_feasibility for every list member and period of the solution;
/// returns all violations (with duals) in (list order, period) order.
std::vector<ScreenViolation> screen_list(
    const Instance& instance, const Eigen::MatrixXi& x,
    const Eigen::MatrixXd& p, const DynamicContingencyList& list,
    const milp::SolverOptions& options, int workers = 1,
    const milp::SolverBackend* backend = nullptr);

}  // namespace ccuc::contingency
