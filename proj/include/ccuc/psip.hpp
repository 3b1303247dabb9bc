#pragma once

// Power system inhibition problem: worst-case contingency identification
// for a fixed commitment and dispatch, as a single MILP.
//
// The inner recourse LP (the relaxed contingency feasibility problem) is
// dualized; products of failure binaries with the bounded dual variables
// (beta, delta_hat, delta_check, gamma, lambda_check) are replaced by
// auxiliary variables under big-M bounds, dropping the sides made redundant
// by sign constraints. A post-solve audit enlarges the bound and retries
// whenever a dual variable lands near it.

#include <Eigen/Core>
#include <map>
#include <string>

#include "ccuc/contingency.hpp"
#include "ccuc/milp.hpp"
#include "ccuc/model.hpp"

namespace ccuc::psip {

struct PsipQuery {
  Eigen::VectorXi x_t;  // commitment at period t
  Eigen::VectorXd p_t;  // dispatch at period t
  int j = 1;            // exact contingency size
  int t = 0;            // period (0-based)

  void validate(const Instance& instance) const;
};

struct BigMPolicy {
  double initial_u = 0.0;  // 0: derive 10 * (1 + max_t D^t) from the instance
  double growth = 10.0;
  int max_retries = 3;

  void validate() const;
  double derive_u(const Instance& instance) const;
};

struct PsipResult {
  double objective = 0.0;  // w*: worst-case shedding above threshold (MW)
  contingency::Contingency worst;
  // dual-side values for diagnostics
  Eigen::VectorXd alpha, zeta;                   // per bus
  Eigen::VectorXd beta, delta_hat, delta_check;  // per line
  Eigen::VectorXd gamma, lambda_hat, lambda_check, eta;  // per generator
  double pi = 0.0;
  Eigen::VectorXd r1, r2, r3;  // per line: linearized products
  Eigen::VectorXd r4, r5;      // per generator
  double u_used = 0.0;
  int retries = 0;
  double max_linearization_error = 0.0;
  std::map<std::string, double> max_abs_dual;  // per linearized class
  long nodes = 0;
  double solve_seconds = 0.0;

  std::string diagnostic_dump(const Instance& instance) const;
};

struct PsipLayout {
  int d_gen0 = 0, d_line0 = 0;  // -1 entries for immune elements
  std::vector<int> d_gen, d_line;
  int alpha0 = 0, beta0 = 0, dhat0 = 0, dchk0 = 0;
  int gamma0 = 0, lhat0 = 0, lchk0 = 0, zeta0 = 0, eta0 = 0, pi0 = 0;
  int r10 = 0, r20 = 0, r30 = 0, r40 = 0, r50 = 0;
};

struct PsipProblem {
  milp::MilpProgram program;
  PsipLayout layout;
};

/// Builds the MILP for one (j, t) query with big-M bound u.
PsipProblem build_psip(const Instance& instance, const PsipQuery& query,
                       double u);

/// Solves with audit-and-retry on the big-M bound. Throws milp::SolveError
/// when retries are exhausted with a binding bound (the message names the
/// binding class).
PsipResult solve_psip(const Instance& instance, const PsipQuery& query,
                      const BigMPolicy& policy,
                      const milp::SolverOptions& options,
                      const milp::SolverBackend* backend = nullptr);

struct PsipVerification {
  double psip_value = 0.0;
  double enumerated_max = 0.0;
  std::vector<contingency::Contingency> argmax;  // all enumerated maximizers
  contingency::Contingency psip_choice;
  long long contingencies_checked = 0;
  bool agrees = false;  // equality within 1e-6 relative and choice attains max
};

/// Oracle check: compares solve_psip against explicit enumeration of all
/// size-j contingencies. Throws when the count exceeds `cap`.
PsipVerification verify_psip_against_enumeration(
    const Instance& instance, const PsipQuery& query, const BigMPolicy& policy,
    const milp::SolverOptions& options, long long cap = 10000,
    const milp::SolverBackend* backend = nullptr);

}  // namespace ccuc::psip
