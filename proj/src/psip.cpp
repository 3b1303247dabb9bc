#include "ccuc/psip.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ccuc/backend.hpp"
#include "ccuc/branch_bound.hpp"

namespace ccuc::psip {

using milp::Sense;
using milp::Term;

void PsipQuery::validate(const Instance& instance) const {
  const int G = instance.system.num_generators();
  if (x_t.size() != G || p_t.size() != G) {
    throw std::invalid_argument("psip query: dimension mismatch");
  }
  if (j < 1) throw std::invalid_argument("psip query: j must be >= 1");
  if (j > instance.reliability.k) {
    throw std::invalid_argument(
        "psip query: j exceeds the reliability spec's k (epsilon_j "
        "undefined)");
  }
  if (t < 0 || t >= instance.periods()) {
    throw std::invalid_argument("psip query: period out of range");
  }
}

void BigMPolicy::validate() const {
  if (initial_u < 0.0) throw std::invalid_argument("big-M: initial_u < 0");
  if (growth <= 1.0) throw std::invalid_argument("big-M: growth must be > 1");
  if (max_retries < 0) throw std::invalid_argument("big-M: max_retries < 0");
}

double BigMPolicy::derive_u(const Instance& instance) const {
  if (initial_u > 0.0) return initial_u;
  double dmax = 0.0;
  for (int t = 0; t < instance.periods(); ++t) {
    dmax = std::max(dmax, instance.demand.total(t));
  }
  return 10.0 * (1.0 + dmax);
}

PsipProblem build_psip(const Instance& instance, const PsipQuery& query,
                       double u) {
  query.validate(instance);
  const PowerSystem& sys = instance.system;
  const int I = sys.num_buses();
  const int G = sys.num_generators();
  const int E = sys.num_lines();
  const int j = query.j;
  const double total_demand = instance.demand.total(query.t);
  const double eps = instance.reliability.eps(j);

  PsipProblem pp;
  milp::MilpProgram& lp = pp.program;
  PsipLayout& L = pp.layout;
  lp.set_maximize(true);

  // failure selectors (immune elements have no variable, d == 0)
  L.d_gen.assign(G, -1);
  L.d_line.assign(E, -1);
  for (int g = 0; g < G; ++g) {
    if (!sys.generators[g].fail_immune) {
      L.d_gen[g] = lp.add_variable("d_" + sys.generators[g].name, 0.0, 1.0,
                                   milp::VarKind::Binary);
    }
  }
  for (int e = 0; e < E; ++e) {
    if (!sys.lines[e].fail_immune) {
      L.d_line[e] = lp.add_variable("d_" + sys.lines[e].name, 0.0, 1.0,
                                    milp::VarKind::Binary);
    }
  }

  auto add_block = [&](const char* base, int count, double lo, double hi,
                       auto namer) {
    int first = lp.num_variables();
    for (int i = 0; i < count; ++i) {
      lp.add_variable(std::string(base) + "_" + namer(i), lo, hi);
    }
    return first;
  };
  auto bus_name = [&](int i) { return sys.buses[i].name; };
  auto gen_name = [&](int g) { return sys.generators[g].name; };
  auto line_name = [&](int e) { return sys.lines[e].name; };

  L.alpha0 = add_block("al", I, -milp::kInf, milp::kInf, bus_name);
  L.beta0 = add_block("be", E, -milp::kInf, milp::kInf, line_name);
  L.dhat0 = add_block("dh", E, -milp::kInf, 0.0, line_name);
  L.dchk0 = add_block("dc", E, -milp::kInf, 0.0, line_name);
  L.gamma0 = add_block("ga", G, -milp::kInf, 0.0, gen_name);
  L.lhat0 = add_block("lh", G, -milp::kInf, 0.0, gen_name);
  L.lchk0 = add_block("lc", G, -milp::kInf, 0.0, gen_name);
  L.zeta0 = add_block("ze", I, -milp::kInf, 0.0, bus_name);
  L.eta0 = add_block("et", G, -milp::kInf, 0.0, gen_name);
  // -pi <= 1 together with pi <= 0 pins pi into [-1, 0]
  L.pi0 = lp.add_variable("pi", -1.0, 0.0);
  L.r10 = add_block("r1", E, -milp::kInf, milp::kInf, line_name);
  L.r20 = add_block("r2", E, -milp::kInf, 0.0, line_name);
  L.r30 = add_block("r3", E, -milp::kInf, 0.0, line_name);
  L.r40 = add_block("r4", G, -milp::kInf, 0.0, gen_name);
  L.r50 = add_block("r5", G, -milp::kInf, 0.0, gen_name);

  // objective: D'(alpha + zeta) + F Delta (r2 + r3) + Pmax x r4
  //            + (Ru Delta + p~) lambda_hat + (Rd Delta - p~) r5
  //            + eps D pi
  for (int i = 0; i < I; ++i) {
    double d = instance.demand.at(i, query.t);
    if (d != 0.0) {
      lp.add_objective(L.alpha0 + i, d);
      lp.add_objective(L.zeta0 + i, d);
    }
  }
  for (int e = 0; e < E; ++e) {
    double cap =
        sys.lines[e].flow_limit * instance.reliability.line_delta(e, j);
    lp.add_objective(L.r20 + e, cap);
    lp.add_objective(L.r30 + e, cap);
  }
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    double delta = instance.reliability.gen_delta(g, j);
    lp.add_objective(L.r40 + g,
                     gen.p_max * static_cast<double>(query.x_t[g]));
    lp.add_objective(L.lhat0 + g, gen.ramp_up * delta + query.p_t[g]);
    lp.add_objective(L.r50 + g, gen.ramp_down * delta - query.p_t[g]);
  }
  lp.add_objective(L.pi0, eps * total_demand);

  // failure budget: exactly j elements
  {
    std::vector<Term> terms;
    for (int g = 0; g < G; ++g) {
      if (L.d_gen[g] >= 0) terms.push_back({L.d_gen[g], 1.0});
    }
    for (int e = 0; e < E; ++e) {
      if (L.d_line[e] >= 0) terms.push_back({L.d_line[e], 1.0});
    }
    lp.add_constraint("budget", std::move(terms), Sense::Equal,
                      static_cast<double>(j));
  }

  // dual feasibility rows of the relaxed CF
  for (int e = 0; e < E; ++e) {
    const TransmissionLine& ln = sys.lines[e];
    lp.add_constraint("dual_f_" + ln.name,
                      {{L.alpha0 + ln.from_bus, -1.0},
                       {L.alpha0 + ln.to_bus, 1.0},
                       {L.beta0 + e, -1.0},
                       {L.dhat0 + e, 1.0},
                       {L.dchk0 + e, -1.0}},
                      Sense::Equal, 0.0);
  }
  for (int g = 0; g < G; ++g) {
    lp.add_constraint("dual_p_" + gen_name(g),
                      {{L.alpha0 + sys.generators[g].bus, 1.0},
                       {L.gamma0 + g, 1.0},
                       {L.lhat0 + g, 1.0},
                       {L.lchk0 + g, -1.0},
                       {L.eta0 + g, -1.0}},
                      Sense::LessEqual, 0.0);
  }
  for (int i = 0; i < I; ++i) {
    lp.add_constraint("dual_q_" + bus_name(i),
                      {{L.alpha0 + i, 1.0}, {L.zeta0 + i, 1.0}, {L.pi0, 1.0}},
                      Sense::LessEqual, 0.0);
  }
  for (int g = 0; g < G; ++g) {
    lp.add_constraint("dual_r_" + gen_name(g),
                      {{L.alpha0 + sys.generators[g].bus, -1.0},
                       {L.eta0 + g, 1.0}},
                      Sense::LessEqual, 1.0);
  }
  for (int i = 0; i < I; ++i) {
    std::vector<Term> terms;
    for (int e : sys.lines_out[i]) {
      terms.push_back({L.r10 + e, sys.lines[e].susceptance});
    }
    for (int e : sys.lines_in[i]) {
      terms.push_back({L.r10 + e, -sys.lines[e].susceptance});
    }
    if (terms.empty()) continue;
    lp.add_constraint("dual_th_" + bus_name(i), std::move(terms), Sense::Equal,
                      0.0);
  }

  // linearization v = (1-d) u; redundant sides dropped for sign-constrained
  // duals. Immune elements (no d variable) get v = u directly.
  auto linearize = [&](const std::string& tag, int v, int uvar, int dvar,
                       bool u_free) {
    if (dvar < 0) {
      lp.add_constraint("lin_eq_" + tag, {{v, 1.0}, {uvar, -1.0}},
                        Sense::Equal, 0.0);
      return;
    }
    // v >= u - U d   and   v <= u + U d
    lp.add_constraint("lin_lo1_" + tag, {{v, 1.0}, {uvar, -1.0}, {dvar, u}},
                      Sense::GreaterEqual, 0.0);
    lp.add_constraint("lin_hi1_" + tag, {{v, 1.0}, {uvar, -1.0}, {dvar, -u}},
                      Sense::LessEqual, 0.0);
    // v >= -U(1-d); the matching upper side is redundant unless u is free
    lp.add_constraint("lin_lo2_" + tag, {{v, 1.0}, {dvar, -u}},
                      Sense::GreaterEqual, -u);
    if (u_free) {
      lp.add_constraint("lin_hi2_" + tag, {{v, 1.0}, {dvar, u}},
                        Sense::LessEqual, u);
    }
  };
  for (int e = 0; e < E; ++e) {
    linearize("r1_" + line_name(e), L.r10 + e, L.beta0 + e, L.d_line[e], true);
    linearize("r2_" + line_name(e), L.r20 + e, L.dhat0 + e, L.d_line[e], false);
    linearize("r3_" + line_name(e), L.r30 + e, L.dchk0 + e, L.d_line[e], false);
  }
  for (int g = 0; g < G; ++g) {
    linearize("r4_" + gen_name(g), L.r40 + g, L.gamma0 + g, L.d_gen[g], false);
    linearize("r5_" + gen_name(g), L.r50 + g, L.lchk0 + g, L.d_gen[g], false);
  }
  return pp;
}

namespace {

Eigen::VectorXd segment_of(const Eigen::VectorXd& v, int first, int count) {
  return v.segment(first, count);
}

}  // namespace

PsipResult solve_psip(const Instance& instance, const PsipQuery& query,
                      const BigMPolicy& policy,
                      const milp::SolverOptions& options,
                      const milp::SolverBackend* backend) {
  policy.validate();
  const PowerSystem& sys = instance.system;
  const int I = sys.num_buses();
  const int G = sys.num_generators();
  const int E = sys.num_lines();

  double u = policy.derive_u(instance);
  // The separation objective drives termination decisions and the oracle
  // equality checks, so the MILP is solved to (near) proven optimality
  // regardless of the master's configured gap.
  milp::SolverOptions tight = options;
  tight.rel_gap = std::min(options.rel_gap, 1e-9);
  std::string binding_class;
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    auto t0 = std::chrono::steady_clock::now();
    PsipProblem pp = build_psip(instance, query, u);
    milp::SolveResult res = backend
                                ? backend->solve_milp(pp.program, tight)
                                : milp::solve_milp(pp.program, tight);
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (res.status == milp::SolveStatus::Infeasible) {
      throw milp::SolveError(
          "PSIP MILP infeasible: failure budget j=" + std::to_string(query.j) +
          " exceeds the number of non-immune elements");
    }
    if (!res.has_incumbent()) {
      throw milp::SolveError("PSIP MILP failed: " +
                             milp::to_string(res.status));
    }

    const PsipLayout& L = pp.layout;
    PsipResult out;
    out.objective = res.objective;
    out.u_used = u;
    out.retries = attempt;
    out.nodes = res.nodes;
    out.solve_seconds = secs;
    const Eigen::VectorXd& v = res.primal;
    for (int g = 0; g < G; ++g) {
      if (L.d_gen[g] >= 0 && v[L.d_gen[g]] > 0.5) {
        out.worst.failed_gens.push_back(g);
      }
    }
    for (int e = 0; e < E; ++e) {
      if (L.d_line[e] >= 0 && v[L.d_line[e]] > 0.5) {
        out.worst.failed_lines.push_back(e);
      }
    }
    out.alpha = segment_of(v, L.alpha0, I);
    out.zeta = segment_of(v, L.zeta0, I);
    out.beta = segment_of(v, L.beta0, E);
    out.delta_hat = segment_of(v, L.dhat0, E);
    out.delta_check = segment_of(v, L.dchk0, E);
    out.gamma = segment_of(v, L.gamma0, G);
    out.lambda_hat = segment_of(v, L.lhat0, G);
    out.lambda_check = segment_of(v, L.lchk0, G);
    out.eta = segment_of(v, L.eta0, G);
    out.pi = v[L.pi0];
    out.r1 = segment_of(v, L.r10, E);
    out.r2 = segment_of(v, L.r20, E);
    out.r3 = segment_of(v, L.r30, E);
    out.r4 = segment_of(v, L.r40, G);
    out.r5 = segment_of(v, L.r50, G);

    auto max_abs = [](const Eigen::VectorXd& w) {
      return w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
    };
    out.max_abs_dual["beta"] = max_abs(out.beta);
    out.max_abs_dual["delta_hat"] = max_abs(out.delta_hat);
    out.max_abs_dual["delta_check"] = max_abs(out.delta_check);
    out.max_abs_dual["gamma"] = max_abs(out.gamma);
    out.max_abs_dual["lambda_check"] = max_abs(out.lambda_check);

    binding_class.clear();
    for (const auto& [cls, mag] : out.max_abs_dual) {
      if (mag >= 0.999 * u) binding_class = cls;
    }
    if (!binding_class.empty()) {
      u *= policy.growth;
      continue;  // retry with an enlarged bound
    }

    // linearization exactness: r must equal (1-d) * dual in any optimum
    double lin_err = 0.0;
    auto check_lin = [&](double r, double dual, int dvar) {
      double live = (dvar >= 0 && v[dvar] > 0.5) ? 0.0 : 1.0;
      lin_err = std::max(lin_err, std::abs(r - live * dual));
    };
    for (int e = 0; e < E; ++e) {
      check_lin(out.r1[e], out.beta[e], L.d_line[e]);
      check_lin(out.r2[e], out.delta_hat[e], L.d_line[e]);
      check_lin(out.r3[e], out.delta_check[e], L.d_line[e]);
    }
    for (int g = 0; g < G; ++g) {
      check_lin(out.r4[g], out.gamma[g], L.d_gen[g]);
      check_lin(out.r5[g], out.lambda_check[g], L.d_gen[g]);
    }
    out.max_linearization_error = lin_err;
    if (lin_err > 1e-6 * (1.0 + u)) {
      throw milp::SolveError(
          "PSIP linearization products deviate from their definitions "
          "(max error " +
          std::to_string(lin_err) + ")");
    }
    if (out.objective < -options.feasibility_tol) {
      throw milp::SolveError("PSIP objective is negative: " +
                             std::to_string(out.objective));
    }
    out.objective = std::max(0.0, out.objective);
    return out;
  }
  throw milp::SolveError(
      "PSIP big-M bound exhausted after " +
      std::to_string(policy.max_retries) +
      " retries; still binding for dual class '" + binding_class + "'");
}

std::string PsipResult::diagnostic_dump(const Instance& instance) const {
  std::ostringstream out;
  out << "psip: w*=" << objective << " MW, contingency "
      << worst.describe(instance) << ", U=" << u_used
      << " (retries " << retries << "), max lin err "
      << max_linearization_error << ", nodes " << nodes << ", "
      << solve_seconds << " s\n";
  for (const auto& [cls, mag] : max_abs_dual) {
    out << "  max|" << cls << "| = " << mag << "\n";
  }
  return out.str();
}

PsipVerification verify_psip_against_enumeration(
    const Instance& instance, const PsipQuery& query, const BigMPolicy& policy,
    const milp::SolverOptions& options, long long cap,
    const milp::SolverBackend* backend) {
  query.validate(instance);
  contingency::ContingencyEnumerator en(instance, query.j);
  if (en.total() > cap) {
    throw std::invalid_argument(
        "verify_psip_against_enumeration: " + std::to_string(en.total()) +
        " contingencies exceed the cap of " + std::to_string(cap));
  }
  PsipVerification out;
  out.enumerated_max = 0.0;
  while (auto c = en.next()) {
    contingency::CfCheck check = contingency::check_feasibility(
        instance, query.x_t, query.p_t, *c, query.t, options, backend);
    ++out.contingencies_checked;
    if (check.violation > out.enumerated_max + 1e-9) {
      out.enumerated_max = check.violation;
      out.argmax.clear();
      out.argmax.push_back(*c);
    } else if (std::abs(check.violation - out.enumerated_max) <= 1e-9 &&
               out.enumerated_max > 0.0) {
      out.argmax.push_back(*c);
    }
  }
  if (out.contingencies_checked == 0) {
    out.psip_value = 0.0;
    out.agrees = true;
    return out;  // no contingencies of this size exist (all immune)
  }
  PsipResult psip = solve_psip(instance, query, policy, options, backend);
  out.psip_value = psip.objective;
  out.psip_choice = psip.worst;
  double rel = std::abs(out.psip_value - out.enumerated_max) /
               std::max(1.0, std::abs(out.enumerated_max));
  bool attains = false;
  if (out.enumerated_max <= options.feasibility_tol) {
    attains = true;  // any choice is fine when nothing is violated
  } else {
    contingency::CfCheck at_choice = contingency::check_feasibility(
        instance, query.x_t, query.p_t, psip.worst, query.t, options, backend);
    attains = std::abs(at_choice.violation - out.enumerated_max) <=
              1e-6 * std::max(1.0, out.enumerated_max);
  }
  out.agrees = rel <= 1e-6 && attains;
  return out;
}

}  // namespace ccuc::psip
