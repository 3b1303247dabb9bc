#pragma once

// Orchestrates the four solution strategies -- extensive form (EF), Benders
// decomposition (BD), and the two contingency screening algorithms (CSA1,
// CSA2 with a dynamic contingency list) -- with termination handling,
// iteration logging, and run reports.

#include <optional>
#include <string>
#include <vector>

#include "ccuc/buc.hpp"
#include "ccuc/contingency.hpp"
#include "ccuc/milp.hpp"
#include "ccuc/model.hpp"
#include "ccuc/psip.hpp"

namespace ccuc::engine {

enum class Algorithm { EF, BD, CSA1, CSA2 };
enum class RunStatus { Optimal, CompliantAtLimit, Infeasible, TimeLimit };

std::string to_string(Algorithm a);
std::string to_string(RunStatus s);
Algorithm algorithm_from_string(const std::string& name);

/// Raised when an algorithm's enumeration or build cap is exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::CSA2;
  milp::SolverOptions solver;
  double time_limit = 10800.0;  // seconds
  int workers = 1;
  psip::BigMPolicy big_m;
  std::string backend = "reference";
  long long ef_build_cap = 5000;       // (contingency, period) blocks
  long long enumeration_cap = 200000;  // BD sweeps / compliance checks
  bool verbose = false;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  int screen_cuts = 0;  // cuts from the dynamic-list screen (CSA2)
  int psip_cuts = 0;    // cuts triggered by PSIP separation
  int sweep_cuts = 0;   // cuts from full BD sweeps
  int psip_solves = 0;
  int cf_solves = 0;
  int list_size = 0;
};

struct ViolationRow {
  std::string elements;
  int period = 0;
  double shed_mw = 0.0;
  double threshold_mw = 0.0;
};

struct RunReport {
  std::string algorithm;
  RunStatus status = RunStatus::Infeasible;
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<contingency::Contingency> final_list;
  int cuts_generated = 0;
  double time_rmp = 0.0, time_psip = 0.0, time_dcf = 0.0, time_total = 0.0;
  std::vector<IterationRecord> trace;
  std::vector<ViolationRow> violation_log;
  std::vector<contingency::FeasibilityCut> cut_pool;  // diagnostics
  std::optional<buc::CommitmentSolution> solution;
  long long contingency_count = 0;  // C for the configured budget
  int k = 0;
  std::vector<double> epsilon;
  std::string backend;
  int workers = 1;

  int list_size() const { return static_cast<int>(final_list.size()); }
  std::string to_json(const Instance& instance) const;
  /// Fixed-width text table mirroring the runtime-breakout columns
  /// (C, k, eps_k, RMP, PSIP, DCF, itr, |L|, cuts).
  std::string table(const Instance& instance) const;
};

RunReport solve_ef(const Instance& instance, const RunConfig& config);
RunReport solve_bd(const Instance& instance, const RunConfig& config);
RunReport solve_csa1(const Instance& instance, const RunConfig& config);
RunReport solve_csa2(const Instance& instance, const RunConfig& config);
RunReport solve(const Instance& instance, const RunConfig& config);

struct ComplianceReport {
  std::vector<contingency::ScreenViolation> violations;
  long long checks = 0;
  bool compliant() const { return violations.empty(); }
};

/// Exhaustive oracle for the reliability criterion: checks every
/// contingency of size 1..k in every period. Throws CapExceeded when the
/// enumeration exceeds `cap` checks.
ComplianceReport verify_compliance(const Instance& instance,
                                   const buc::CommitmentSolution& solution,
                                   const milp::SolverOptions& options,
                                   long long cap = 200000, int workers = 1,
                                   const milp::SolverBackend* backend = nullptr);

}  // namespace ccuc::engine
