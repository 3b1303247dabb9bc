#include "ccuc/engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "ccuc/backend.hpp"
#include "ccuc/parallel.hpp"
#include "json.hpp"

namespace ccuc::engine {

using contingency::Contingency;
using contingency::DynamicContingencyList;
using contingency::ScreenViolation;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::EF: return "ef";
    case Algorithm::BD: return "bd";
    case Algorithm::CSA1: return "csa1";
    case Algorithm::CSA2: return "csa2";
  }
  return "?";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Optimal: return "optimal";
    case RunStatus::CompliantAtLimit: return "compliant_at_limit";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ef") return Algorithm::EF;
  if (name == "bd") return Algorithm::BD;
  if (name == "csa1") return Algorithm::CSA1;
  if (name == "csa2") return Algorithm::CSA2;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected ef|bd|csa1|csa2)");
}

void RunConfig::validate() const {
  solver.validate();
  if (time_limit <= 0) throw std::invalid_argument("time_limit must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  big_m.validate();
}

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

struct PhaseTimer {
  double rmp = 0.0, psip = 0.0, dcf = 0.0;

  template <typename Fn>
  auto time(double& bucket, Fn&& fn) {
    Stopwatch sw;
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      bucket += sw.seconds();
    } else {
      auto out = fn();
      bucket += sw.seconds();
      return out;
    }
  }
};

ViolationRow to_row(const Instance& instance, const ScreenViolation& v) {
  ViolationRow row;
  row.elements = v.contingency.describe(instance);
  row.period = v.period + 1;
  row.shed_mw = v.violation;
  row.threshold_mw = v.threshold;
  return row;
}

long long contingency_budget_count(const Instance& instance) {
  return contingency::count_contingencies(instance.effective_generators(),
                                          instance.effective_lines(),
                                          instance.reliability.k);
}

// Shared scaffolding for the iterative algorithms: master solve + extract,
// cut pooling, timing, tracing.
struct MasterLoop {
  const Instance& instance;
  const RunConfig& config;
  const milp::SolverBackend* backend;
  buc::CutPool pool;
  PhaseTimer timer;
  Stopwatch total;
  RunReport report;
  std::optional<buc::CommitmentSolution> current;
  double last_master_obj = -milp::kInf;

  MasterLoop(const Instance& inst, const RunConfig& cfg)
      : instance(inst), config(cfg), backend(&milp::backend(cfg.backend)) {
    report.algorithm = to_string(cfg.algorithm);
    report.k = inst.reliability.k;
    report.epsilon = inst.reliability.epsilon;
    report.backend = cfg.backend;
    report.workers = cfg.workers;
    report.contingency_count = contingency_budget_count(inst);
  }

  bool out_of_time() const { return total.seconds() > config.time_limit; }

  // returns false when the master is infeasible
  bool solve_master() {
    buc::MasterProblem mp = buc::build_master(instance, pool);
    milp::SolveResult res = timer.time(timer.rmp, [&] {
      return backend->solve_milp(mp.program, config.solver);
    });
    if (res.status == milp::SolveStatus::Infeasible) {
      return false;
    }
    if (!res.has_incumbent()) {
      throw milp::SolveError("master solve returned no incumbent (status " +
                             milp::to_string(res.status) + ")");
    }
    current = buc::extract_solution(res, instance, mp.layout, config.solver);
    report.gap = res.gap;
    last_master_obj = current->objective;
    return true;
  }

  int add_violation_cuts(const std::vector<ScreenViolation>& violations,
                         int iteration) {
    int added = 0;
    for (const ScreenViolation& v : violations) {
      report.violation_log.push_back(to_row(instance, v));
      contingency::FeasibilityCut cut =
          contingency::make_cut(v.check, instance, v.contingency, v.period);
      cut.iteration = iteration;
      // strong duality: the cut must reproduce the violation at the
      // incumbent that generated it
      Eigen::VectorXi xi = current->x.col(v.period);
      Eigen::VectorXd pd = current->dispatch.col(v.period);
      double at_incumbent = cut.evaluate(xi, pd);
      if (std::abs(at_incumbent - v.violation) >
          1e-6 * (1.0 + std::abs(v.violation))) {
        throw milp::SolveError(
            "feasibility cut does not reproduce its violation (" +
            std::to_string(at_incumbent) + " vs " +
            std::to_string(v.violation) + ")");
      }
      if (pool.add(std::move(cut))) ++added;
    }
    return added;
  }

  void log(const IterationRecord& rec) {
    report.trace.push_back(rec);
    if (config.verbose) {
      std::cerr << "[" << report.algorithm << "] itr " << rec.iteration
                << " obj " << rec.objective << " cuts(screen/psip/sweep) "
                << rec.screen_cuts << "/" << rec.psip_cuts << "/"
                << rec.sweep_cuts << " |L| " << rec.list_size << "\n";
    }
  }

  void finish(RunStatus status) {
    report.status = status;
    report.cuts_generated = pool.size();
    report.cut_pool = pool.cuts();
    report.solution = current;
    if (current) report.objective = current->objective;
    report.time_rmp = timer.rmp;
    report.time_psip = timer.psip;
    report.time_dcf = timer.dcf;
    report.time_total = total.seconds();
    if (status == RunStatus::Optimal && current) {
      for (const contingency::FeasibilityCut& cut : pool.cuts()) {
        Eigen::VectorXi xi = current->x.col(cut.period);
        Eigen::VectorXd pd = current->dispatch.col(cut.period);
        double v = cut.evaluate(xi, pd);
        if (v > 1e-5 * (1.0 + std::abs(cut.constant))) {
          throw milp::SolveError(
              "accepted solution violates a pooled cut by " +
              std::to_string(v));
        }
      }
    }
  }

  // Time-limit exit: report a compliant incumbent when that can be proven
  // within the enumeration cap.
  void finish_at_time_limit() {
    RunStatus status = RunStatus::TimeLimit;
    if (current) {
      long long count = report.contingency_count *
                        static_cast<long long>(instance.periods());
      if (count <= config.enumeration_cap) {
        ComplianceReport cr =
            verify_compliance(instance, *current, config.solver,
                              config.enumeration_cap, config.workers, backend);
        if (cr.compliant()) status = RunStatus::CompliantAtLimit;
      }
    }
    finish(status);
  }
};

}  // namespace

RunReport solve_ef(const Instance& instance, const RunConfig& config) {
  config.validate();
  instance.validate();
  Stopwatch total;
  const milp::SolverBackend& be = milp::backend(config.backend);
  const PowerSystem& sys = instance.system;
  const int G = sys.num_generators();
  const int E = sys.num_lines();
  const int I = sys.num_buses();
  const int T = instance.periods();
  const int k = instance.reliability.k;

  long long blocks =
      contingency_budget_count(instance) * static_cast<long long>(T);
  if (blocks > config.ef_build_cap) {
    throw CapExceeded("extensive form would need " + std::to_string(blocks) +
                      " recourse blocks, above the build cap of " +
                      std::to_string(config.ef_build_cap));
  }

  buc::MasterProblem mp = buc::build_master(instance, buc::CutPool());
  milp::MilpProgram& lp = mp.program;
  const buc::MasterLayout& L = mp.layout;

  for (int j = 1; j <= k; ++j) {
    contingency::ContingencyEnumerator en(instance, j);
    while (auto copt = en.next()) {
      const Contingency& c = *copt;
      const double eps = instance.reliability.eps(j);
      std::string cname = "c";
      for (int g : c.failed_gens) cname += "g" + std::to_string(g);
      for (int e : c.failed_lines) cname += "e" + std::to_string(e);
      for (int t = 0; t < T; ++t) {
        std::string suffix = cname + "_t" + std::to_string(t + 1);
        int p0 = lp.num_variables();
        for (int g = 0; g < G; ++g) {
          double hi = c.involves_gen(g) ? 0.0 : milp::kInf;
          lp.add_variable("pc_" + sys.generators[g].name + "_" + suffix, 0.0,
                          hi);
        }
        int f0 = lp.num_variables();
        for (int e = 0; e < E; ++e) {
          double live = c.involves_line(e) ? 0.0 : 1.0;
          double cap = sys.lines[e].flow_limit *
                       instance.reliability.line_delta(e, j) * live;
          lp.add_variable("fc_" + sys.lines[e].name + "_" + suffix, -cap, cap);
        }
        int th0 = lp.num_variables();
        for (int i = 0; i < I; ++i) {
          lp.add_variable("thc_" + sys.buses[i].name + "_" + suffix,
                          -milp::kInf, milp::kInf);
        }
        int q0 = lp.num_variables();
        for (int i = 0; i < I; ++i) {
          lp.add_variable("qc_" + sys.buses[i].name + "_" + suffix, 0.0,
                          instance.demand.at(i, t));
          lp.set_start_hint_upper(q0 + i);
        }
        for (int i = 0; i < I; ++i) {
          std::vector<milp::Term> terms;
          for (int g : sys.gens_at_bus[i]) terms.push_back({p0 + g, 1.0});
          for (int e : sys.lines_in[i]) terms.push_back({f0 + e, 1.0});
          for (int e : sys.lines_out[i]) terms.push_back({f0 + e, -1.0});
          terms.push_back({q0 + i, 1.0});
          lp.add_constraint("bal_" + sys.buses[i].name + "_" + suffix,
                            std::move(terms), milp::Sense::Equal,
                            instance.demand.at(i, t));
        }
        for (int e = 0; e < E; ++e) {
          // failed lines are already pinned to zero flow by their bounds
          if (c.involves_line(e)) continue;
          const TransmissionLine& ln = sys.lines[e];
          lp.add_constraint("flow_" + ln.name + "_" + suffix,
                            {{th0 + ln.from_bus, ln.susceptance},
                             {th0 + ln.to_bus, -ln.susceptance},
                             {f0 + e, -1.0}},
                            milp::Sense::Equal, 0.0);
        }
        for (int g = 0; g < G; ++g) {
          if (c.involves_gen(g)) continue;  // output pinned to zero
          const Generator& gen = sys.generators[g];
          double delta = instance.reliability.gen_delta(g, j);
          lp.add_constraint("cap_" + gen.name + "_" + suffix,
                            {{p0 + g, 1.0}, {L.x(g, t), -gen.p_max}},
                            milp::Sense::LessEqual, 0.0);
          lp.add_constraint("rup_" + gen.name + "_" + suffix,
                            {{p0 + g, 1.0}, {L.p(g, t), -1.0}},
                            milp::Sense::LessEqual, gen.ramp_up * delta);
          lp.add_constraint("rdn_" + gen.name + "_" + suffix,
                            {{p0 + g, -1.0}, {L.p(g, t), 1.0}},
                            milp::Sense::LessEqual, gen.ramp_down * delta);
        }
        std::vector<milp::Term> agg;
        for (int i = 0; i < I; ++i) agg.push_back({q0 + i, 1.0});
        lp.add_constraint("agg_" + suffix, std::move(agg),
                          milp::Sense::LessEqual,
                          eps * instance.demand.total(t));
      }
    }
  }

  RunReport report;
  report.algorithm = to_string(Algorithm::EF);
  report.k = k;
  report.epsilon = instance.reliability.epsilon;
  report.backend = config.backend;
  report.workers = config.workers;
  report.contingency_count = contingency_budget_count(instance);
  report.iterations = 1;

  milp::SolverOptions opts = config.solver;
  opts.time_limit = config.time_limit;
  milp::SolveResult res = be.solve_milp(lp, opts);
  report.time_rmp = total.seconds();
  report.time_total = total.seconds();
  report.gap = res.gap;
  switch (res.status) {
    case milp::SolveStatus::Infeasible:
      report.status = RunStatus::Infeasible;
      return report;
    case milp::SolveStatus::TimeLimit:
      if (!res.has_incumbent()) {
        report.status = RunStatus::TimeLimit;
        return report;
      }
      // any EF incumbent satisfies every recourse block by construction
      report.status = RunStatus::CompliantAtLimit;
      break;
    case milp::SolveStatus::Optimal:
    case milp::SolveStatus::GapLimit:
      report.status = RunStatus::Optimal;
      break;
    default:
      throw milp::SolveError("extensive form: unexpected status " +
                             milp::to_string(res.status));
  }
  report.solution =
      buc::extract_solution(res, instance, mp.layout, config.solver);
  report.objective = report.solution->objective;
  report.time_rmp = total.seconds();
  report.time_total = total.seconds();
  IterationRecord rec;
  rec.iteration = 1;
  rec.objective = report.objective;
  report.trace.push_back(rec);
  return report;
}

RunReport solve_bd(const Instance& instance, const RunConfig& config) {
  config.validate();
  instance.validate();
  MasterLoop loop(instance, config);
  const int T = instance.periods();

  long long checks =
      loop.report.contingency_count * static_cast<long long>(T);
  if (checks > config.enumeration_cap) {
    throw CapExceeded("BD sweep would need " + std::to_string(checks) +
                      " feasibility checks, above the enumeration cap of " +
                      std::to_string(config.enumeration_cap));
  }
  DynamicContingencyList all;
  for (int j = 1; j <= instance.reliability.k; ++j) {
    contingency::ContingencyEnumerator en(instance, j);
    while (auto c = en.next()) {
      all.add(*c, instance.system.num_generators());
    }
  }

  for (int iteration = 1;; ++iteration) {
    if (!loop.solve_master()) {
      loop.finish(RunStatus::Infeasible);
      return loop.report;
    }
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      return loop.report;
    }
    std::vector<ScreenViolation> violations = loop.timer.time(
        loop.timer.dcf, [&] {
          return contingency::screen_list(instance, loop.current->x,
                                          loop.current->dispatch, all,
                                          config.solver, config.workers,
                                          loop.backend);
        });
    int added = loop.add_violation_cuts(violations, iteration);
    IterationRecord rec;
    rec.iteration = iteration;
    rec.objective = loop.current->objective;
    rec.sweep_cuts = added;
    rec.cf_solves = all.size() * T;
    loop.log(rec);
    loop.report.iterations = iteration;
    if (added == 0) {
      loop.finish(RunStatus::Optimal);
      return loop.report;
    }
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      return loop.report;
    }
  }
}

namespace {

struct PsipOutcome {
  int j = 0, t = 0;
  double w = 0.0;
  Contingency worst;
};

// Runs PSIP for a batch of (j, t) pairs; results merged in (j, t) order.
std::vector<PsipOutcome> run_psip_batch(
    const Instance& instance, const buc::CommitmentSolution& sol,
    const std::vector<std::pair<int, int>>& tasks, const RunConfig& config,
    const milp::SolverBackend* backend) {
  std::vector<PsipOutcome> out(tasks.size());
  parallel_for_index(
      static_cast<int>(tasks.size()), config.workers, [&](int idx) {
        auto [j, t] = tasks[idx];
        psip::PsipQuery q;
        q.x_t = sol.x.col(t);
        q.p_t = sol.dispatch.col(t);
        q.j = j;
        q.t = t;
        psip::PsipResult r =
            psip::solve_psip(instance, q, config.big_m, config.solver, backend);
        out[idx] = {j, t, r.objective, r.worst};
      });
  return out;
}

}  // namespace

RunReport solve_csa1(const Instance& instance, const RunConfig& config) {
  config.validate();
  instance.validate();
  MasterLoop loop(instance, config);
  const int T = instance.periods();
  const int k = instance.reliability.k;
  const double tol = config.solver.feasibility_tol;

  for (int iteration = 1;; ++iteration) {
    if (!loop.solve_master()) {
      loop.finish(RunStatus::Infeasible);
      return loop.report;
    }
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      return loop.report;
    }
    std::vector<std::pair<int, int>> tasks;
    for (int j = 1; j <= k; ++j) {
      for (int t = 0; t < T; ++t) tasks.emplace_back(j, t);
    }
    std::vector<PsipOutcome> outcomes = loop.timer.time(loop.timer.psip, [&] {
      return run_psip_batch(instance, *loop.current, tasks, config,
                            loop.backend);
    });
    IterationRecord rec;
    rec.iteration = iteration;
    rec.objective = loop.current->objective;
    rec.psip_solves = static_cast<int>(tasks.size());
    rec.list_size = 0;
    int added = 0;
    for (const PsipOutcome& o : outcomes) {
      if (o.w <= tol) continue;
      contingency::CfCheck check = loop.timer.time(loop.timer.dcf, [&] {
        return contingency::check_feasibility(
            instance, loop.current->x.col(o.t), loop.current->dispatch.col(o.t),
            o.worst, o.t, config.solver, loop.backend);
      });
      ++rec.cf_solves;
      if (check.feasible) {
        throw milp::SolveError(
            "PSIP reported a violated contingency that the feasibility LP "
            "deems satisfied (w*=" +
            std::to_string(o.w) + ")");
      }
      ScreenViolation v;
      v.contingency = o.worst;
      v.period = o.t;
      v.violation = check.violation;
      v.threshold =
          instance.reliability.eps(o.worst.size()) * instance.demand.total(o.t);
      v.check = std::move(check);
      added += loop.add_violation_cuts({v}, iteration);
    }
    rec.psip_cuts = added;
    loop.log(rec);
    loop.report.iterations = iteration;
    if (added == 0) {
      loop.finish(RunStatus::Optimal);
      return loop.report;
    }
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      return loop.report;
    }
  }
}

RunReport solve_csa2(const Instance& instance, const RunConfig& config) {
  config.validate();
  instance.validate();
  MasterLoop loop(instance, config);
  const int T = instance.periods();
  const int k = instance.reliability.k;
  const int G = instance.system.num_generators();
  const double tol = config.solver.feasibility_tol;
  DynamicContingencyList list;

  for (int iteration = 1;; ++iteration) {
    if (!loop.solve_master()) {
      loop.report.final_list = list.items();
      loop.finish(RunStatus::Infeasible);
      return loop.report;
    }
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      loop.report.final_list = list.items();
      return loop.report;
    }

    IterationRecord rec;
    rec.iteration = iteration;
    rec.objective = loop.current->objective;
    loop.report.iterations = iteration;

    // Phase 1: screen the dynamic list; PSIP is never invoked in an
    // iteration where screening already produced a cut.
    std::vector<ScreenViolation> screen_violations =
        loop.timer.time(loop.timer.dcf, [&] {
          return contingency::screen_list(instance, loop.current->x,
                                          loop.current->dispatch, list,
                                          config.solver, config.workers,
                                          loop.backend);
        });
    rec.cf_solves += list.size() * T;
    rec.screen_cuts = loop.add_violation_cuts(screen_violations, iteration);
    rec.list_size = list.size();
    if (rec.screen_cuts > 0) {
      loop.log(rec);
      continue;
    }

    // Phase 2: PSIP separation. With one worker this follows the serial
    // first-hit scheme; with several, whole (j, t) batches are evaluated
    // and every positive outcome is admitted in deterministic order.
    bool found = false;
    std::vector<Contingency> fresh;
    if (config.workers <= 1) {
      for (int j = 1; j <= k && !found; ++j) {
        for (int t = 0; t < T && !found; ++t) {
          std::vector<PsipOutcome> one = loop.timer.time(
              loop.timer.psip, [&] {
                return run_psip_batch(instance, *loop.current, {{j, t}},
                                      config, loop.backend);
              });
          ++rec.psip_solves;
          if (one[0].w > tol) {
            found = true;
            fresh.push_back(one[0].worst);
          }
        }
      }
    } else {
      std::vector<std::pair<int, int>> tasks;
      for (int j = 1; j <= k; ++j) {
        for (int t = 0; t < T; ++t) tasks.emplace_back(j, t);
      }
      std::vector<PsipOutcome> outcomes =
          loop.timer.time(loop.timer.psip, [&] {
            return run_psip_batch(instance, *loop.current, tasks, config,
                                  loop.backend);
          });
      rec.psip_solves += static_cast<int>(tasks.size());
      std::set<std::vector<int>> seen;
      for (const PsipOutcome& o : outcomes) {
        if (o.w > tol && seen.insert(o.worst.key(G)).second) {
          found = true;
          fresh.push_back(o.worst);
        }
      }
    }

    if (!found) {
      loop.log(rec);
      loop.report.final_list = list.items();
      loop.finish(RunStatus::Optimal);
      return loop.report;
    }

    // Admit each new contingency: add it to the list and immediately check
    // it in all periods, generating a cut per violated period.
    for (const Contingency& c : fresh) {
      list.add(c, G);
      DynamicContingencyList single;
      single.add(c, G);
      std::vector<ScreenViolation> vv = loop.timer.time(loop.timer.dcf, [&] {
        return contingency::screen_list(instance, loop.current->x,
                                        loop.current->dispatch, single,
                                        config.solver, config.workers,
                                        loop.backend);
      });
      rec.cf_solves += T;
      if (vv.empty()) {
        throw milp::SolveError(
            "PSIP found contingency " + c.describe(instance) +
            " but no period shows a violation in the feasibility LP");
      }
      rec.psip_cuts += loop.add_violation_cuts(vv, iteration);
    }
    if (rec.psip_cuts == 0) {
      throw milp::SolveError(
          "PSIP separation found violations but produced no new cuts");
    }
    rec.list_size = list.size();
    loop.log(rec);
    if (loop.out_of_time()) {
      loop.finish_at_time_limit();
      loop.report.final_list = list.items();
      return loop.report;
    }
  }
}

RunReport solve(const Instance& instance, const RunConfig& config) {
  switch (config.algorithm) {
    case Algorithm::EF: return solve_ef(instance, config);
    case Algorithm::BD: return solve_bd(instance, config);
    case Algorithm::CSA1: return solve_csa1(instance, config);
    case Algorithm::CSA2: return solve_csa2(instance, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

ComplianceReport verify_compliance(const Instance& instance,
                                   const buc::CommitmentSolution& solution,
                                   const milp::SolverOptions& options,
                                   long long cap, int workers,
                                   const milp::SolverBackend* backend) {
  const int T = instance.periods();
  long long count = contingency_budget_count(instance) *
                    static_cast<long long>(T);
  if (count > cap) {
    throw CapExceeded("compliance verification needs " +
                      std::to_string(count) +
                      " checks, above the cap of " + std::to_string(cap));
  }
  DynamicContingencyList all;
  for (int j = 1; j <= instance.reliability.k; ++j) {
    contingency::ContingencyEnumerator en(instance, j);
    while (auto c = en.next()) all.add(*c, instance.system.num_generators());
  }
  ComplianceReport report;
  report.checks = static_cast<long long>(all.size()) * T;
  report.violations =
      contingency::screen_list(instance, solution.x, solution.dispatch, all,
                               options, workers, backend);
  return report;
}

std::string RunReport::to_json(const Instance& instance) const {
  nlohmann::json j;
  j["report_version"] = 1;
  j["algorithm"] = algorithm;
  j["status"] = to_string(status);
  j["objective"] = objective;
  j["gap"] = gap;
  j["iterations"] = iterations;
  j["cuts"] = cuts_generated;
  j["list_size"] = list_size();
  j["contingency_count"] = contingency_count;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["backend"] = backend;
  j["workers"] = workers;
  j["time"] = {{"rmp", time_rmp},
               {"psip", time_psip},
               {"dcf", time_dcf},
               {"total", time_total}};
  j["final_list"] = nlohmann::json::array();
  for (const Contingency& c : final_list) {
    j["final_list"].push_back({{"gens", c.failed_gens},
                               {"lines", c.failed_lines},
                               {"label", c.describe(instance)}});
  }
  j["trace"] = nlohmann::json::array();
  for (const IterationRecord& r : trace) {
    j["trace"].push_back({{"iteration", r.iteration},
                          {"objective", r.objective},
                          {"screen_cuts", r.screen_cuts},
                          {"psip_cuts", r.psip_cuts},
                          {"sweep_cuts", r.sweep_cuts},
                          {"psip_solves", r.psip_solves},
                          {"cf_solves", r.cf_solves},
                          {"list_size", r.list_size}});
  }
  j["violations"] = nlohmann::json::array();
  for (const ViolationRow& v : violation_log) {
    j["violations"].push_back({{"elements", v.elements},
                               {"period", v.period},
                               {"shed_mw", v.shed_mw},
                               {"threshold_mw", v.threshold_mw}});
  }
  if (solution) {
    j["solution"] =
        nlohmann::json::parse(buc::solution_to_json(*solution, instance));
  }
  return j.dump(2) + "\n";
}

std::string RunReport::table(const Instance& instance) const {
  (void)instance;
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-6s %12s %3s %8s %9s %9s %9s %6s %5s %6s\n",
                "alg", "C", "k", "eps_k", "RMP", "PSIP", "DCF", "itr", "|L|",
                "cuts");
  out << buf;
  double eps_k = epsilon.empty() ? 0.0 : epsilon.back();
  std::snprintf(buf, sizeof(buf),
                "%-6s %12lld %3d %8.4g %9.2f %9.2f %9.2f %6d %5d %6d\n",
                algorithm.c_str(), contingency_count, k, eps_k, time_rmp,
                time_psip, time_dcf, iterations, list_size(), cuts_generated);
  out << buf;
  return out.str();
}

}  // namespace ccuc::engine
